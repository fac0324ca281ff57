#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "gpofdm/types.hpp"

namespace gpofdm {

/// Mean tap powers on a sample-spaced delay grid. Powers are normalized to
/// unit total on construction.
class PowerDelayProfile {
public:
    PowerDelayProfile(std::string name, double sample_period_us, std::vector<std::size_t> delays,
                      std::vector<double> powers);

    const std::string& name() const { return name_; }
    double sample_period_us() const { return sample_period_us_; }
    const std::vector<std::size_t>& delays() const { return delays_; }
    const std::vector<double>& powers() const { return powers_; }
    /// Impulse response length (last delay + 1).
    std::size_t length() const { return delays_.back() + 1; }
    /// True when the supplied powers already summed to one within 1e-9.
    bool was_normalized() const { return was_normalized_; }

private:
    std::string name_;
    double sample_period_us_;
    std::vector<std::size_t> delays_;
    std::vector<double> powers_;
    bool was_normalized_ = true;
};

/// Parses the PDP text format:
///
///   # comment
///   name BU12
///   sample_period_us 0.2
///   tap 0 0.0523
///   tap 1 0.1313
///
/// Powers are linear. A warning goes to stderr when they do not sum to one.
PowerDelayProfile parse_pdp(const std::string& text, const std::string& origin = "<string>");
PowerDelayProfile load_pdp(const std::filesystem::path& path);

/// One draw of the FIR channel h[0..L-1].
struct ChannelRealization {
    ComplexSequence taps;

    ChannelRealization() = default;
    explicit ChannelRealization(ComplexSequence t);

    std::size_t length() const { return taps.size(); }
};

/// AWGN level for a given Eb/N0.
///
/// Transmitted time samples carry energy 1/N each (unit-energy symbols through
/// idft), and N*bits_per_symbol bits ride on N+K samples, so the complex noise
/// variance per sample is N0 = 1 / (N * bits_per_symbol * (N/(N+K)) * Eb/N0),
/// i.e. sigma^2 = N0/2 per real dimension.
struct NoiseConfig {
    double ebno_db = 0.0;
    int bits_per_symbol = 2;
    double overhead_factor = 1.0;
    std::size_t subcarriers = 1;

    double ebno_linear() const;
    /// N0, total complex variance per time-domain sample.
    double noise_variance() const;
    void validate() const;
};

ChannelRealization draw_realization(const PowerDelayProfile& pdp, Rng& rng);
ChannelRealization draw_realization(const PowerDelayProfile& pdp, std::uint64_t seed);

/// Full linear convolution x * h (length |x|+L-1), plus AWGN when noise is set.
ComplexSequence apply_channel(std::span<const cplx> x, const ChannelRealization& h,
                              const std::optional<NoiseConfig>& noise, Rng& rng);
ComplexSequence apply_channel(std::span<const cplx> x, const ChannelRealization& h,
                              const std::optional<NoiseConfig>& noise, std::uint64_t seed);

/// H[k], the n-point DFT of the zero-padded impulse response.
ComplexSequence frequency_response(const ChannelRealization& h, std::size_t n);

/// H_psi[k] = dft(D h), equal to H(e^{j(w_k - alpha)}) for psi = e^{j alpha}.
ComplexSequence shifted_frequency_response(const ChannelRealization& h, std::size_t n, cplx psi);

/// Tap correlation over dt under Jakes' spectrum, J0(2 pi f_d dt).
double jakes_correlation(double doppler_hz, double dt_s);

/// Maximum Doppler shift for a mobile at speed_kmh and carrier carrier_hz.
double doppler_from_speed(double speed_kmh, double carrier_hz);

/// First-order Gauss-Markov step: h' = rho h + sqrt(1 - rho^2) w, with w drawn
/// from the PDP so every tap keeps its mean power.
ChannelRealization evolve_doppler(const ChannelRealization& h_prev, const PowerDelayProfile& pdp,
                                  double doppler_hz, double dt_s, Rng& rng);
ChannelRealization evolve_doppler(const ChannelRealization& h_prev, const PowerDelayProfile& pdp,
                                  double doppler_hz, double dt_s, std::uint64_t seed);

}  // namespace gpofdm
