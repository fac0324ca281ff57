#include "gpofdm/spectral.hpp"

#include <cmath>
#include <unordered_map>

namespace gpofdm {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(-2 pi i k / n) for k < n/2, cached per thread and size.
const std::vector<cplx>& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    return cache.emplace(n, std::move(w)).first->second;
}

void fft_radix2(ComplexSequence& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx t = w[k * stride] * a[start + k + half];
                a[start + k + half] = a[start + k] - t;
                a[start + k] += t;
            }
        }
    }
}

void require_nonempty(std::span<const cplx> x, const char* what) {
    if (x.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

void require_taps(std::span<const cplx> h, std::size_t n, const char* what) {
    if (h.empty()) throw std::invalid_argument(std::string(what) + ": empty impulse response");
    if (h.size() > n)
        throw std::invalid_argument(std::string(what) + ": impulse response longer than n (" +
                                    std::to_string(h.size()) + " > " + std::to_string(n) + ")");
}

}  // namespace

ComplexSequence dft_direct(std::span<const cplx> x) {
    require_nonempty(x, "dft_direct");
    const std::size_t n = x.size();
    ComplexSequence out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            // reduce k*m mod n first so the angle stays small
            const auto idx = static_cast<double>((k * m) % n);
            acc += x[m] * std::polar(1.0, -2.0 * kPi * idx / static_cast<double>(n));
        }
        out[k] = acc;
    }
    return out;
}

ComplexSequence dft(std::span<const cplx> x) {
    require_nonempty(x, "dft");
    if (!is_power_of_two(x.size())) return dft_direct(x);
    ComplexSequence a(x.begin(), x.end());
    fft_radix2(a);
    return a;
}

ComplexSequence idft(std::span<const cplx> x) {
    require_nonempty(x, "idft");
    ComplexSequence a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::conj(x[i]);
    a = dft(a);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : a) v = std::conj(v) * scale;
    return a;
}

ComplexMatrix dft_matrix(std::size_t n) {
    ComplexMatrix f(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            f(i, k) = std::polar(1.0, -2.0 * kPi * static_cast<double>((i * k) % n) /
                                          static_cast<double>(n));
    return f;
}

ComplexMatrix build_circulant(std::span<const cplx> h, std::size_t n) {
    return build_generalized_skew_circulant(h, n, cplx{1.0, 0.0});
}

ComplexMatrix build_generalized_skew_circulant(std::span<const cplx> h, std::size_t n, cplx phi) {
    require_taps(h, n, "build_generalized_skew_circulant");
    if (phi == cplx{0.0, 0.0})
        throw std::invalid_argument("build_generalized_skew_circulant: phi must be nonzero");
    const auto tap = [&](std::size_t idx) { return idx < h.size() ? h[idx] : cplx{}; };
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i >= j) {
                m(i, j) = tap(i - j);
            } else {
                m(i, j) = phi * tap(n + i - j);
            }
        }
    }
    return m;
}

ComplexMatrix build_zp_matrix(std::span<const cplx> h, std::size_t n) {
    if (h.empty()) throw std::invalid_argument("build_zp_matrix: empty impulse response");
    if (n == 0) throw std::invalid_argument("build_zp_matrix: n must be positive");
    const std::size_t rows = n + h.size() - 1;
    ComplexMatrix m = ComplexMatrix::Zero(rows, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < h.size(); ++l) m(j + l, j) = h[l];
    return m;
}

ComplexMatrix pseudoinverse(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument("pseudoinverse: empty matrix");
    if (m.rows() < m.cols())
        throw SingularMatrixError("pseudoinverse: wide matrix cannot have full column rank");
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
    const auto r = qr.matrixR();
    const double largest = std::abs(r(0, 0));
    const double smallest = std::abs(r(m.cols() - 1, m.cols() - 1));
    if (!(largest > 0.0) || smallest < 1e-12 * largest)
        throw SingularMatrixError("pseudoinverse: matrix is rank deficient (pivot ratio " +
                                  std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
    return qr.solve(ComplexMatrix::Identity(m.rows(), m.rows()));
}

ComplexSequence d_matrix(cplx psi, std::size_t n) {
    if (psi == cplx{0.0, 0.0}) throw std::invalid_argument("d_matrix: psi must be nonzero");
    const double radius = std::abs(psi);
    const double angle = std::arg(psi);
    ComplexSequence d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = static_cast<double>(i);
        d[i] = std::polar(std::pow(radius, p), angle * p);
    }
    return d;
}

ComplexSequence hadamard(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hadamard: size mismatch");
    ComplexSequence out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ComplexSequence zero_pad(std::span<const cplx> h, std::size_t n) {
    ComplexSequence out(n, cplx{});
    for (std::size_t i = 0; i < std::min(n, h.size()); ++i) out[i] = h[i];
    return out;
}

double squared_norm(std::span<const cplx> x) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc;
}

}  // namespace gpofdm
