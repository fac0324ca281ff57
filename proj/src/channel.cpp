#include "gpofdm/channel.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "gpofdm/spectral.hpp"

namespace gpofdm {

PowerDelayProfile::PowerDelayProfile(std::string name, double sample_period_us,
                                     std::vector<std::size_t> delays, std::vector<double> powers)
    : name_(std::move(name)),
      sample_period_us_(sample_period_us),
      delays_(std::move(delays)),
      powers_(std::move(powers)) {
    if (delays_.empty()) throw std::invalid_argument("PowerDelayProfile: no taps");
    if (delays_.size() != powers_.size())
        throw std::invalid_argument("PowerDelayProfile: delay/power count mismatch");
    if (delays_.front() != 0) throw std::invalid_argument("PowerDelayProfile: first delay must be 0");
    for (std::size_t i = 1; i < delays_.size(); ++i)
        if (delays_[i] <= delays_[i - 1])
            throw std::invalid_argument("PowerDelayProfile: delays must be strictly increasing");
    for (double p : powers_)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("PowerDelayProfile: powers must be finite and nonnegative");
    if (!(sample_period_us_ > 0.0))
        throw std::invalid_argument("PowerDelayProfile: sample period must be positive");
    const double total = std::accumulate(powers_.begin(), powers_.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("PowerDelayProfile: total power is zero");
    was_normalized_ = std::abs(total - 1.0) <= 1e-9;
    for (double& p : powers_) p /= total;
}

PowerDelayProfile parse_pdp(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::string name;
    double period = 0.0;
    std::vector<std::size_t> delays;
    std::vector<double> powers;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        const auto fail = [&](const std::string& msg) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (key == "name") {
            if (!(ls >> name)) fail("missing profile name");
        } else if (key == "sample_period_us") {
            if (!(ls >> period)) fail("missing sample period");
        } else if (key == "tap") {
            long long d = -1;
            double p = 0.0;
            if (!(ls >> d >> p) || d < 0) fail("expected 'tap <delay_samples> <power_linear>'");
            delays.push_back(static_cast<std::size_t>(d));
            powers.push_back(p);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (name.empty()) throw std::invalid_argument(origin + ": missing 'name'");
    if (period <= 0.0) throw std::invalid_argument(origin + ": missing 'sample_period_us'");
    PowerDelayProfile pdp(name, period, std::move(delays), std::move(powers));
    if (!pdp.was_normalized())
        std::cerr << "warning: " << origin << ": tap powers of '" << name
                  << "' do not sum to 1; normalized\n";
    return pdp;
}

PowerDelayProfile load_pdp(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open power delay profile: " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_pdp(buf.str(), path.string());
}

ChannelRealization::ChannelRealization(ComplexSequence t) : taps(std::move(t)) {
    if (taps.empty()) throw std::invalid_argument("ChannelRealization: no taps");
    for (const auto& v : taps)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("ChannelRealization: non-finite tap");
}

double NoiseConfig::ebno_linear() const { return std::pow(10.0, ebno_db / 10.0); }

double NoiseConfig::noise_variance() const {
    validate();
    return 1.0 / (static_cast<double>(subcarriers) * bits_per_symbol * overhead_factor * ebno_linear());
}

void NoiseConfig::validate() const {
    if (bits_per_symbol < 1) throw std::invalid_argument("NoiseConfig: bits_per_symbol must be >= 1");
    if (!(overhead_factor > 0.0 && overhead_factor <= 1.0))
        throw std::invalid_argument("NoiseConfig: overhead factor must be in (0, 1]");
    if (subcarriers == 0) throw std::invalid_argument("NoiseConfig: subcarriers must be positive");
    if (!std::isfinite(ebno_db)) throw std::invalid_argument("NoiseConfig: Eb/N0 must be finite");
}

ChannelRealization draw_realization(const PowerDelayProfile& pdp, Rng& rng) {
    ComplexSequence taps(pdp.length(), cplx{});
    for (std::size_t i = 0; i < pdp.delays().size(); ++i)
        taps[pdp.delays()[i]] = complex_gaussian(rng, pdp.powers()[i]);
    return ChannelRealization(std::move(taps));
}

ChannelRealization draw_realization(const PowerDelayProfile& pdp, std::uint64_t seed) {
    Rng rng(seed);
    return draw_realization(pdp, rng);
}

ComplexSequence apply_channel(std::span<const cplx> x, const ChannelRealization& h,
                              const std::optional<NoiseConfig>& noise, Rng& rng) {
    if (x.empty()) return {};
    const auto& taps = h.taps;
    ComplexSequence y(x.size() + taps.size() - 1, cplx{});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t l = 0; l < taps.size(); ++l) y[i + l] += taps[l] * x[i];
    if (noise) {
        const double n0 = noise->noise_variance();
        std::normal_distribution<double> g(0.0, std::sqrt(n0 / 2.0));
        for (auto& v : y) {
            const double re = g(rng);
            const double im = g(rng);
            v += cplx{re, im};
        }
    }
    return y;
}

ComplexSequence apply_channel(std::span<const cplx> x, const ChannelRealization& h,
                              const std::optional<NoiseConfig>& noise, std::uint64_t seed) {
    Rng rng(seed);
    return apply_channel(x, h, noise, rng);
}

ComplexSequence frequency_response(const ChannelRealization& h, std::size_t n) {
    if (h.length() > n)
        throw std::invalid_argument("frequency_response: channel length " +
                                    std::to_string(h.length()) + " exceeds n=" + std::to_string(n));
    return dft(zero_pad(h.taps, n));
}

ComplexSequence shifted_frequency_response(const ChannelRealization& h, std::size_t n, cplx psi) {
    if (!is_unit_modulus(psi))
        throw std::invalid_argument("shifted_frequency_response: |psi| must be 1");
    if (h.length() > n)
        throw std::invalid_argument("shifted_frequency_response: channel longer than n");
    auto padded = zero_pad(h.taps, n);
    const auto d = d_matrix(psi, h.length());
    for (std::size_t i = 0; i < h.length(); ++i) padded[i] *= d[i];
    return dft(padded);
}

double jakes_correlation(double doppler_hz, double dt_s) {
    return std::cyl_bessel_j(0.0, 2.0 * kPi * doppler_hz * dt_s);
}

double doppler_from_speed(double speed_kmh, double carrier_hz) {
    // 3e8 m/s: 20 km/h at 2.4 GHz gives the usual 44.44 Hz
    constexpr double kSpeedOfLight = 3.0e8;
    return speed_kmh / 3.6 * carrier_hz / kSpeedOfLight;
}

ChannelRealization evolve_doppler(const ChannelRealization& h_prev, const PowerDelayProfile& pdp,
                                  double doppler_hz, double dt_s, Rng& rng) {
    if (doppler_hz < 0.0) throw std::invalid_argument("evolve_doppler: negative Doppler");
    if (!(dt_s > 0.0)) throw std::invalid_argument("evolve_doppler: dt must be positive");
    if (h_prev.length() != pdp.length())
        throw std::invalid_argument("evolve_doppler: realization does not match profile length");
    if (doppler_hz == 0.0) return h_prev;
    const double rho = jakes_correlation(doppler_hz, dt_s);
    const double innovation = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    ComplexSequence taps = h_prev.taps;
    for (std::size_t i = 0; i < pdp.delays().size(); ++i) {
        const std::size_t d = pdp.delays()[i];
        taps[d] = rho * taps[d] + innovation * complex_gaussian(rng, pdp.powers()[i]);
    }
    return ChannelRealization(std::move(taps));
}

ChannelRealization evolve_doppler(const ChannelRealization& h_prev, const PowerDelayProfile& pdp,
                                  double doppler_hz, double dt_s, std::uint64_t seed) {
    Rng rng(seed);
    return evolve_doppler(h_prev, pdp, doppler_hz, dt_s, rng);
}

}  // namespace gpofdm
