#pragma once

#include <span>

#include "gpofdm/types.hpp"

namespace gpofdm {

/// Square Gray-coded QAM with unit average symbol energy.
///
/// A label of log2(M) bits is split in half: the leading half selects the
/// in-phase level and the trailing half the quadrature level. Each half is
/// Gray-decoded to a level index, index 0 being the most positive amplitude,
/// so 4-QAM maps 00, 01, 11, 10 to (1+j), (1-j), (-1-j), (-1+j) over sqrt(2).
class QamConstellation {
public:
    explicit QamConstellation(int order);

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    int levels_per_axis() const { return levels_; }

    /// Constellation point for an integer label (MSB = first bit on the wire).
    cplx point(unsigned label) const;

    /// All M points indexed by label.
    const std::vector<cplx>& points() const { return points_; }

    /// Nearest point label. Exact ties go to the smaller label.
    unsigned decide(cplx symbol) const;

private:
    int order_;
    int bits_per_symbol_;
    int bits_per_axis_;
    int levels_;
    double scale_;
    std::vector<double> axis_amplitude_;  // indexed by per-axis Gray label
    std::vector<cplx> points_;

    unsigned decide_axis(double v) const;
};

/// Static link parameters: subcarriers N, guard length K, constellation and
/// the sample rate used to turn symbol counts into seconds.
struct OfdmConfig {
    std::size_t n = 64;
    std::size_t k = 16;
    QamConstellation constellation{4};
    double sample_rate_hz = 5.0e6;

    OfdmConfig() = default;
    OfdmConfig(std::size_t n_, std::size_t k_, int order, double sample_rate = 5.0e6);

    /// N / (N + K), the guard-overhead factor on effective SNR.
    double overhead_factor() const {
        return static_cast<double>(n) / static_cast<double>(n + k);
    }
    void validate() const;
};

ComplexSequence map_bits(std::span<const std::uint8_t> bits, const QamConstellation& c);

BitSequence demap_symbols(std::span<const cplx> symbols, const QamConstellation& c);

/// x = D^{-1} idft(X). psi = 1 gives plain OFDM modulation.
ComplexSequence ofdm_modulate(std::span<const cplx> x_freq, cplx psi);

/// Y = dft(D y).
ComplexSequence ofdm_demodulate(std::span<const cplx> y_time, cplx psi);

}  // namespace gpofdm
