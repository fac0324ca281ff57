#pragma once

#include <span>

#include <Eigen/Dense>

#include "gpofdm/types.hpp"

namespace gpofdm {

using ComplexMatrix = Eigen::MatrixXcd;

// Transform convention: forward dft is F_N x with F_N = [exp(-2 pi i j k / N)],
// unnormalized. idft carries the 1/N factor so idft(dft(x)) == x.

/// Forward DFT. Radix-2 FFT when N is a power of two, direct evaluation otherwise.
ComplexSequence dft(std::span<const cplx> x);

/// Inverse DFT, (1/N) F_N^* x.
ComplexSequence idft(std::span<const cplx> x);

/// O(N^2) forward DFT by definition. Reference path for tests.
ComplexSequence dft_direct(std::span<const cplx> x);

/// N x N DFT matrix F_N.
ComplexMatrix dft_matrix(std::size_t n);

/// n x n circulant matrix whose first column is h zero-padded to n.
ComplexMatrix build_circulant(std::span<const cplx> h, std::size_t n);

/// n x n Toeplitz matrix with entry h[i-j] on and below the diagonal and
/// phi * h[n+i-j] above it. phi == 1 reduces to build_circulant.
ComplexMatrix build_generalized_skew_circulant(std::span<const cplx> h, std::size_t n, cplx phi);

/// (n+L-1) x n linear convolution matrix; column j holds h starting at row j.
ComplexMatrix build_zp_matrix(std::span<const cplx> h, std::size_t n);

/// Moore-Penrose pseudoinverse of a full column rank matrix, via column-pivoted
/// Householder QR. Throws SingularMatrixError when the smallest pivot of R is
/// below 1e-12 times the largest.
ComplexMatrix pseudoinverse(const ComplexMatrix& m);

/// Diagonal of D = diag(1, psi, psi^2, ..., psi^(n-1)).
ComplexSequence d_matrix(cplx psi, std::size_t n);

/// Elementwise product a .* b, sizes must match.
ComplexSequence hadamard(std::span<const cplx> a, std::span<const cplx> b);

/// Returns h zero-padded (or truncated) to length n.
ComplexSequence zero_pad(std::span<const cplx> h, std::size_t n);

double squared_norm(std::span<const cplx> x);

}  // namespace gpofdm
