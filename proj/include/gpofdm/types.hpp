#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpofdm {

using cplx = std::complex<double>;

/// Baseband sample vector (time or frequency domain).
using ComplexSequence = std::vector<cplx>;

/// Hard bits, one per element, each 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

/// Random stream handle. Every stochastic operation takes one of these or a seed.
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a matrix that must have full column rank does not.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mixes a base seed with up to three stream coordinates (splitmix64 finalizer).
/// Used so that trial i of sweep point p always sees the same randomness.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Draws a circularly-symmetric complex Gaussian with E|z|^2 = variance.
cplx complex_gaussian(Rng& rng, double variance);

bool is_unit_modulus(cplx z, double tol = 1e-9);

}  // namespace gpofdm
