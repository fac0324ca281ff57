#pragma once

#include <span>

#include "gpofdm/channel.hpp"
#include "gpofdm/spectral.hpp"

namespace gpofdm {

/// Below this magnitude a channel bin is treated as a spectral null.
inline constexpr double kZfNullThreshold = 1e-15;

struct ZfResult {
    ComplexSequence symbols;
    std::vector<std::size_t> null_bins;  // bins forced to zero
};

/// Per-subcarrier zero forcing, X[k] = Y[k] / H[k]. Null bins come back as 0.
ZfResult zf_detect(std::span<const cplx> y_freq, std::span<const cplx> h_freq);

/// Which part of the zero-padded received block the ZP receiver works on.
enum class ZpWindow {
    /// The n samples K..N+K-1; the equivalent channel is the top n x n block of
    /// H_ZP (lower triangular, invertible iff h[0] != 0).
    Stripped,
    /// The n+L-1 samples of the full linear convolution, with the tall H_ZP.
    Full,
};

/// ZP-OFDM detector X = F_N H^+ y with the pseudoinverse computed once per channel.
class ZpDetector {
public:
    ZpDetector(const ChannelRealization& h, std::size_t n, ZpWindow window);

    ZpWindow window() const { return window_; }
    std::size_t input_length() const { return static_cast<std::size_t>(pinv_.cols()); }
    /// F_N H^+, the map from received window to symbol estimates.
    const ComplexMatrix& equalizer() const { return equalizer_; }

    ComplexSequence detect(std::span<const cplx> y) const;

private:
    std::size_t n_;
    ZpWindow window_;
    ComplexMatrix pinv_;
    ComplexMatrix equalizer_;
};

/// Picks the window from the input length: n samples uses the stripped window,
/// n+L-1 or more uses the full tall matrix (extra samples are ignored).
ComplexSequence zp_detect(std::span<const cplx> y, const ChannelRealization& h, std::size_t n);

}  // namespace gpofdm
