#include <doctest.h>

#include "gpofdm/channel.hpp"
#include "gpofdm/detect.hpp"
#include "gpofdm/guard.hpp"
#include "gpofdm/modem.hpp"
#include "gpofdm/spectral.hpp"
#include "support.hpp"

using namespace gpofdm;
using namespace testing;

TEST_CASE("zero forcing") {
    std::mt19937_64 rng(51);
    const auto X = random_vector(rng, 16);
    SUBCASE("flat channel passes Y through") {
        const auto r = zf_detect(X, ComplexSequence(16, 1.0));
        CHECK(r.symbols == X);
        CHECK(r.null_bins.empty());
    }
    SUBCASE("noiseless Y = H X is inverted") {
        const auto H = random_vector(rng, 16);
        CHECK(max_abs_diff(zf_detect(hadamard(H, X), H).symbols, X) < 1e-12 * max_abs(X));
    }
    SUBCASE("null bins are flagged and zeroed") {
        const auto H = frequency_response(ChannelRealization(two_tap), 64);
        const auto Xq = map_bits(BitSequence(128, 1), QamConstellation(4));
        const auto r = zf_detect(hadamard(H, Xq), H);
        REQUIRE(r.null_bins.size() == 1);
        CHECK(r.null_bins[0] == 32);
        CHECK(r.symbols[32] == cplx{});
        // the zeroed bin decides to label 00, so it is wrong in both bits
        // for this all-ones payload
        const auto bits = demap_symbols(r.symbols, QamConstellation(4));
        CHECK(bits[64] == 0);
        CHECK(bits[65] == 0);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(zf_detect(X, ComplexSequence(8, 1.0)), std::invalid_argument);
    }
}

TEST_CASE("null-bin decisions average to the 1/(2N) floor") {
    // over random payloads the forced 00 decision is wrong in one bit out of
    // two on average, one bin of N
    std::mt19937_64 rng(52);
    const QamConstellation c(4);
    const auto H = frequency_response(ChannelRealization(two_tap), 64);
    long long errors = 0, bits = 0;
    for (int t = 0; t < 2000; ++t) {
        BitSequence b(128);
        for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1u);
        const auto got = demap_symbols(zf_detect(hadamard(H, map_bits(b, c)), H).symbols, c);
        for (std::size_t i = 0; i < b.size(); ++i) errors += b[i] != got[i];
        bits += 128;
    }
    const double ber = static_cast<double>(errors) / static_cast<double>(bits);
    CHECK(std::abs(ber - 1.0 / 128) < 3 * std::sqrt(0.25 / (2.0 * 2000)) / 64);
}

TEST_CASE("ZP detection") {
    std::mt19937_64 rng(53);
    SUBCASE("identity channel") {
        const auto X = random_vector(rng, 8);
        CHECK(max_abs_diff(zp_detect(idft(X), ChannelRealization({1.0}), 8), X) < 1e-12);
    }
    SUBCASE("null channel recovers X with either window") {
        for (std::size_t n : {4u, 8u, 16u, 64u}) {
            const auto X = random_vector(rng, n);
            const ChannelRealization h(two_tap);
            const auto rx = apply_channel(add_prefix(idft(X), n / 4, ZeroPadding{}), h, std::nullopt, 0);
            const ComplexSequence tail(rx.begin() + static_cast<std::ptrdiff_t>(n / 4), rx.end());
            const auto stripped = zp_detect(strip_guard(rx, n, n / 4), h, n);
            const auto full = zp_detect(tail, h, n);
            CHECK(max_abs_diff(stripped, X) < 1e-9);
            CHECK(max_abs_diff(full, X) < 1e-9);
        }
    }
    SUBCASE("window sizes") {
        const ChannelRealization h(random_vector(rng, 3));
        CHECK(ZpDetector(h, 8, ZpWindow::Stripped).input_length() == 8);
        CHECK(ZpDetector(h, 8, ZpWindow::Full).input_length() == 10);
        CHECK_THROWS_AS(zp_detect(ComplexSequence(9, 1.0), h, 8), std::invalid_argument);
    }
    SUBCASE("h[0] = 0 makes the square window singular but the tall one usable") {
        const ChannelRealization h({0.0, 1.0, 0.5});
        CHECK_THROWS_AS(ZpDetector(h, 8, ZpWindow::Stripped), SingularMatrixError);
        const auto X = random_vector(rng, 8);
        const auto rx = apply_channel(idft(X), h, std::nullopt, 0);
        CHECK(max_abs_diff(zp_detect(rx, h, 8), X) < 1e-9);
    }
    SUBCASE("all-zero channel is rank deficient") {
        CHECK_THROWS_AS(ZpDetector(ChannelRealization({0.0, 0.0}), 4, ZpWindow::Full), SingularMatrixError);
    }
}

TEST_CASE("ZP noise is coloured as F H+ predicts") {
    // empirical covariance of X_hat - X against F H+ (sigma^2 I) H+^H F^H
    const std::size_t n = 8;
    const ChannelRealization h(two_tap);
    const ZpDetector det(h, n, ZpWindow::Stripped);
    const double n0 = 0.01;
    const ComplexMatrix& G = det.equalizer();
    const ComplexMatrix predicted = n0 * G * G.adjoint();

    Rng rng(54);
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    constexpr int kTrials = 40000;
    for (int t = 0; t < kTrials; ++t) {
        ComplexSequence w(n);
        for (auto& v : w) v = complex_gaussian(rng, n0);
        const auto e = det.detect(w);
        Eigen::Map<const Eigen::VectorXcd> ev(e.data(), static_cast<Eigen::Index>(n));
        acc += ev * ev.adjoint();
    }
    acc /= static_cast<double>(kTrials);
    const double scale = predicted.diagonal().real().maxCoeff();
    CHECK((acc - predicted).cwiseAbs().maxCoeff() < 0.05 * scale);

    // not white: off-diagonal terms are a sizeable fraction of the diagonal
    double off = 0.0;
    for (Eigen::Index i = 0; i < predicted.rows(); ++i)
        for (Eigen::Index j = 0; j < predicted.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(predicted(i, j)));
    CHECK(off > 0.1 * scale);
}
