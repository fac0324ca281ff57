#include "gpofdm/modem.hpp"

#include <cmath>

#include "gpofdm/spectral.hpp"

namespace gpofdm {

namespace {

unsigned gray_to_binary(unsigned g) {
    unsigned b = g;
    for (unsigned shift = g >> 1; shift != 0; shift >>= 1) b ^= shift;
    return b;
}

void require_unit_psi(cplx psi, const char* what) {
    if (!is_unit_modulus(psi))
        throw std::invalid_argument(std::string(what) + ": |psi| must be 1 (got " +
                                    std::to_string(std::abs(psi)) + ")");
}

}  // namespace

QamConstellation::QamConstellation(int order) : order_(order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("QamConstellation: order must be 4, 16 or 64");
    bits_per_symbol_ = static_cast<int>(std::lround(std::log2(order)));
    bits_per_axis_ = bits_per_symbol_ / 2;
    levels_ = 1 << bits_per_axis_;
    // mean energy of (+-1, +-3, ...) on both axes is 2(A^2 - 1)/3
    scale_ = 1.0 / std::sqrt(2.0 * (levels_ * levels_ - 1) / 3.0);
    axis_amplitude_.resize(levels_);
    for (int g = 0; g < levels_; ++g) {
        const int idx = static_cast<int>(gray_to_binary(static_cast<unsigned>(g)));
        axis_amplitude_[g] = static_cast<double>(levels_ - 1 - 2 * idx);
    }
    points_.resize(order_);
    for (int label = 0; label < order_; ++label) points_[label] = point(static_cast<unsigned>(label));
}

cplx QamConstellation::point(unsigned label) const {
    const unsigned mask = (1u << bits_per_axis_) - 1u;
    const unsigned i_bits = (label >> bits_per_axis_) & mask;
    const unsigned q_bits = label & mask;
    return {axis_amplitude_[i_bits] * scale_, axis_amplitude_[q_bits] * scale_};
}

unsigned QamConstellation::decide_axis(double v) const {
    unsigned best = 0;
    double best_dist = std::abs(v - axis_amplitude_[0] * scale_);
    for (int g = 1; g < levels_; ++g) {
        const double d = std::abs(v - axis_amplitude_[g] * scale_);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<unsigned>(g);
        }
    }
    return best;
}

unsigned QamConstellation::decide(cplx symbol) const {
    // Square grid: the nearest point is the per-axis nearest level, and the
    // smallest-label tie-break also decomposes per axis (I bits lead).
    return (decide_axis(symbol.real()) << bits_per_axis_) | decide_axis(symbol.imag());
}

OfdmConfig::OfdmConfig(std::size_t n_, std::size_t k_, int order, double sample_rate)
    : n(n_), k(k_), constellation(order), sample_rate_hz(sample_rate) {
    validate();
}

void OfdmConfig::validate() const {
    if (n < 2) throw std::invalid_argument("OfdmConfig: n must be at least 2");
    if (k == 0 || k >= n) throw std::invalid_argument("OfdmConfig: guard length must satisfy 0 < k < n");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("OfdmConfig: sample rate must be positive");
}

ComplexSequence map_bits(std::span<const std::uint8_t> bits, const QamConstellation& c) {
    const auto bps = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % bps != 0)
        throw std::invalid_argument("map_bits: bit count " + std::to_string(bits.size()) +
                                    " not divisible by " + std::to_string(bps));
    ComplexSequence out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
        out[s] = c.point(label);
    }
    return out;
}

BitSequence demap_symbols(std::span<const cplx> symbols, const QamConstellation& c) {
    const auto bps = static_cast<std::size_t>(c.bits_per_symbol());
    BitSequence bits(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const unsigned label = c.decide(symbols[s]);
        for (std::size_t b = 0; b < bps; ++b)
            bits[s * bps + b] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1u);
    }
    return bits;
}

ComplexSequence ofdm_modulate(std::span<const cplx> x_freq, cplx psi) {
    require_unit_psi(psi, "ofdm_modulate");
    auto x = idft(x_freq);
    if (psi == cplx{1.0, 0.0}) return x;
    return hadamard(x, d_matrix(std::conj(psi), x.size()));
}

ComplexSequence ofdm_demodulate(std::span<const cplx> y_time, cplx psi) {
    require_unit_psi(psi, "ofdm_demodulate");
    if (psi == cplx{1.0, 0.0}) return dft(y_time);
    return dft(hadamard(y_time, d_matrix(psi, y_time.size())));
}

}  // namespace gpofdm
