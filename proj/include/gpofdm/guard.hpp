#pragma once

#include <span>
#include <variant>

#include "gpofdm/types.hpp"

namespace gpofdm {

struct CyclicPrefix {};

/// Zero-valued guard of K samples placed ahead of the symbol. In a stream of
/// back-to-back symbols this is the trailing zero guard of the previous symbol.
struct ZeroPadding {};

/// Prefix made of the last K samples scaled by phi = psi^N, |psi| = 1.
class GeneralizedPrefix {
public:
    explicit GeneralizedPrefix(cplx psi);
    static GeneralizedPrefix from_alpha(double alpha);

    cplx psi() const { return psi_; }
    double alpha() const { return std::arg(psi_); }
    /// phi = psi^n, computed from the angle so it matches d_matrix(psi, n+1).back().
    cplx phi(std::size_t n) const;

private:
    cplx psi_;
};

using PrefixScheme = std::variant<CyclicPrefix, ZeroPadding, GeneralizedPrefix>;

/// Returns the N+K transmit block for one OFDM symbol.
ComplexSequence add_prefix(std::span<const cplx> x, std::size_t k, const PrefixScheme& scheme);

/// Keeps samples k .. n+k-1 of a received block.
ComplexSequence strip_guard(std::span<const cplx> y, std::size_t n, std::size_t k);

/// Generalized skew-circular convolution:
///   y[m] = sum_l h[l] u[m-l] x[<m-l>_N],  u = 1 for m-l >= 0, phi otherwise.
ComplexSequence gsc_convolve(std::span<const cplx> x, std::span<const cplx> h, cplx phi);

}  // namespace gpofdm
