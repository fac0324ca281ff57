#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "gpofdm/types.hpp"

namespace testing {

using gpofdm::cplx;
using gpofdm::ComplexSequence;

inline ComplexSequence random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexSequence v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

inline cplx random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-gpofdm::kPi, gpofdm::kPi);
    return std::polar(1.0, u(rng));
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double max_abs_diff(const ComplexSequence& a, const ComplexSequence& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const ComplexSequence& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

inline const ComplexSequence two_tap{{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}};

}  // namespace testing
