#include "gpofdm/guard.hpp"

#include <cmath>

namespace gpofdm {

GeneralizedPrefix::GeneralizedPrefix(cplx psi) : psi_(psi) {
    if (!is_unit_modulus(psi))
        throw std::invalid_argument("GeneralizedPrefix: |psi| must be 1 (got " +
                                    std::to_string(std::abs(psi)) + ")");
}

GeneralizedPrefix GeneralizedPrefix::from_alpha(double alpha) {
    return GeneralizedPrefix(std::polar(1.0, alpha));
}

cplx GeneralizedPrefix::phi(std::size_t n) const {
    return std::polar(std::pow(std::abs(psi_), static_cast<double>(n)),
                      std::arg(psi_) * static_cast<double>(n));
}

ComplexSequence add_prefix(std::span<const cplx> x, std::size_t k, const PrefixScheme& scheme) {
    const std::size_t n = x.size();
    if (k == 0 || k >= n)
        throw std::invalid_argument("add_prefix: guard length must satisfy 0 < k < N (k=" +
                                    std::to_string(k) + ", N=" + std::to_string(n) + ")");
    ComplexSequence out(n + k);
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ZeroPadding>) {
                std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), cplx{});
            } else {
                cplx phi{1.0, 0.0};
                if constexpr (std::is_same_v<S, GeneralizedPrefix>) phi = s.phi(n);
                for (std::size_t i = 0; i < k; ++i) out[i] = phi * x[n - k + i];
            }
        },
        scheme);
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

ComplexSequence strip_guard(std::span<const cplx> y, std::size_t n, std::size_t k) {
    if (y.size() < n + k)
        throw std::invalid_argument("strip_guard: received block of " + std::to_string(y.size()) +
                                    " samples is shorter than n+k=" + std::to_string(n + k));
    return ComplexSequence(y.begin() + static_cast<std::ptrdiff_t>(k),
                           y.begin() + static_cast<std::ptrdiff_t>(k + n));
}

ComplexSequence gsc_convolve(std::span<const cplx> x, std::span<const cplx> h, cplx phi) {
    const std::size_t n = x.size();
    if (h.empty()) throw std::invalid_argument("gsc_convolve: empty impulse response");
    if (h.size() > n) throw std::invalid_argument("gsc_convolve: impulse response longer than x");
    if (phi == cplx{0.0, 0.0}) throw std::invalid_argument("gsc_convolve: phi must be nonzero");
    ComplexSequence y(n, cplx{});
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{};
        for (std::size_t l = 0; l < h.size(); ++l) {
            if (m >= l)
                acc += h[l] * x[m - l];
            else
                acc += h[l] * (phi * x[n + m - l]);
        }
        y[m] = acc;
    }
    return y;
}

}  // namespace gpofdm
