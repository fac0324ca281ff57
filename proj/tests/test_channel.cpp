#include <doctest.h>

#include <fstream>

#include "gpofdm/channel.hpp"
#include "gpofdm/spectral.hpp"
#include "support.hpp"

using namespace gpofdm;
using namespace testing;

namespace {

PowerDelayProfile two_tap_pdp() { return PowerDelayProfile("two-tap", 0.2, {0, 1}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("PDP construction and normalization") {
    const auto p = PowerDelayProfile("x", 0.2, {0, 2, 5}, {2.0, 1.0, 1.0});
    CHECK_FALSE(p.was_normalized());
    CHECK(p.powers()[0] == doctest::Approx(0.5));
    CHECK(p.length() == 6);
    CHECK(two_tap_pdp().was_normalized());

    CHECK_THROWS_AS(PowerDelayProfile("x", 0.2, {1, 2}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile("x", 0.2, {0, 2, 2}, {0.3, 0.3, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile("x", 0.2, {0, 1}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile("x", 0.2, {0, 1}, {-0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile("x", 0.2, {0}, {0.0}), std::invalid_argument);
}

TEST_CASE("PDP text format") {
    const auto p = parse_pdp("# comment\nname demo\nsample_period_us 0.2\ntap 0 0.25  # first\n\ntap 3 0.75\n");
    CHECK(p.name() == "demo");
    CHECK(p.delays() == std::vector<std::size_t>{0, 3});
    CHECK(p.was_normalized());
    CHECK_THROWS_AS(parse_pdp("name a\nsample_period_us 0.2\ntap 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pdp("name a\ntap 0 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pdp("name a\nsample_period_us 0.2\nbogus 1\n"), std::invalid_argument);
}

TEST_CASE("shipped COST-207 profiles") {
    for (const char* file : {"tu12.pdp", "bu12.pdp"}) {
        const auto p = load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/" + file);
        CHECK(p.delays().size() == 12);
        CHECK(p.was_normalized());
        double total = 0.0;
        for (double v : p.powers()) total += v;
        CHECK(std::abs(total - 1.0) < 1e-9);
        CHECK(p.sample_period_us() == doctest::Approx(0.2));
    }
    CHECK(load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/tu12.pdp").length() == 26);
    CHECK(load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/bu12.pdp").length() == 51);
    CHECK_THROWS(load_pdp("/nonexistent/file.pdp"));
}

TEST_CASE("Rayleigh draws have the PDP powers") {
    const auto pdp = two_tap_pdp();
    Rng rng(41);
    double e0 = 0.0, e1 = 0.0;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
        const auto h = draw_realization(pdp, rng);
        e0 += std::norm(h.taps[0]);
        e1 += std::norm(h.taps[1]);
    }
    CHECK(std::abs(e0 / kDraws - 0.5) < 0.01);
    CHECK(std::abs(e1 / kDraws - 0.5) < 0.01);

    const PowerDelayProfile single("one", 0.2, {0}, {1.0});
    double e = 0.0;
    for (int i = 0; i < kDraws; ++i) e += std::norm(draw_realization(single, rng).taps[0]);
    CHECK(std::abs(e / kDraws - 1.0) < 0.02);
}

TEST_CASE("draws are zero between delays, reproducible and unit energy on average") {
    const auto bu = load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/bu12.pdp");
    const auto a = draw_realization(bu, 7);
    const auto b = draw_realization(bu, 7);
    CHECK(a.taps == b.taps);
    CHECK(a.taps != draw_realization(bu, 8).taps);
    CHECK(a.taps[3] == cplx{});
    CHECK(a.length() == 51);

    for (const char* file : {"tu12.pdp", "bu12.pdp"}) {
        const auto p = load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/" + file);
        Rng rng(42);
        double total = 0.0;
        constexpr int kDraws = 100000;
        for (int i = 0; i < kDraws; ++i) total += squared_norm(draw_realization(p, rng).taps);
        CHECK(std::abs(total / kDraws - 1.0) < 0.02);
    }
}

TEST_CASE("linear convolution") {
    const std::optional<NoiseConfig> none;
    const ComplexSequence x{1, cplx{2, 1}, 3};
    CHECK(apply_channel(x, ChannelRealization({1.0}), none, 0) == x);
    const cplx a{0.5, 1}, b{-2, 0.25};
    CHECK(apply_channel(ComplexSequence{1, 0}, ChannelRealization({a, b}), none, 0) == ComplexSequence{a, b, 0});
    CHECK(apply_channel(ComplexSequence{}, ChannelRealization({a, b}), none, 0).empty());
}

TEST_CASE("noise level") {
    const NoiseConfig nc{10.0, 2, 64.0 / 80.0, 64};
    const double n0 = 1.0 / (64 * 2 * 0.8 * 10.0);
    CHECK(nc.noise_variance() == doctest::Approx(n0).epsilon(1e-14));

    const ComplexSequence zeros(1000000, cplx{});
    const auto y = apply_channel(zeros, ChannelRealization({1.0}), nc, 43);
    double re = 0.0, im = 0.0;
    for (const auto& v : y) {
        re += v.real() * v.real();
        im += v.imag() * v.imag();
    }
    CHECK(std::abs(re / y.size() / (n0 / 2) - 1.0) < 0.02);
    CHECK(std::abs(im / y.size() / (n0 / 2) - 1.0) < 0.02);

    CHECK_THROWS_AS(NoiseConfig({1.0, 0, 1.0, 64}).noise_variance(), std::invalid_argument);
    CHECK_THROWS_AS(NoiseConfig({1.0, 2, 1.5, 64}).noise_variance(), std::invalid_argument);
}

TEST_CASE("frequency responses") {
    const ChannelRealization h(two_tap);
    const auto H = frequency_response(h, 64);
    CHECK(std::abs(H[32]) < 1e-15);
    CHECK(std::abs(std::abs(H[0]) - std::sqrt(2.0)) < 1e-14);
    for (const auto& v : frequency_response(ChannelRealization({1.0}), 16)) CHECK(v == cplx{1.0, 0.0});
    CHECK_THROWS_AS(frequency_response(h, 1), std::invalid_argument);

    CHECK(max_abs_diff(shifted_frequency_response(h, 64, 1.0), H) < 1e-15);
    for (const auto& v : shifted_frequency_response(h, 64, std::polar(1.0, kPi / 64))) CHECK(std::abs(v) > 0.03);
    const auto moved = shifted_frequency_response(h, 64, std::polar(1.0, 2 * kPi / 64));
    CHECK(std::abs(moved[33]) < 1e-12);
    CHECK(std::abs(moved[32]) > 0.05);
    CHECK_THROWS_AS(shifted_frequency_response(h, 64, 2.0), std::invalid_argument);
}

TEST_CASE("shift by 2 pi / n rotates the response by one bin") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = std::size_t{1} << random_size(rng, 2, 9);
        const ChannelRealization h(random_vector(rng, random_size(rng, 1, n)));
        const auto H = frequency_response(h, n);
        const auto S = shifted_frequency_response(h, n, std::polar(1.0, 2 * kPi / static_cast<double>(n)));
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(S[(k + 1) % n] - H[k]) < 1e-10 * (1 + max_abs(H)));
    }
}

TEST_CASE("shifted response is H evaluated at w_k - alpha") {
    std::mt19937_64 rng(45);
    const ChannelRealization h(random_vector(rng, 6));
    const double alpha = 0.37;
    const auto S = shifted_frequency_response(h, 32, std::polar(1.0, alpha));
    for (std::size_t k = 0; k < 32; ++k) {
        const double w = 2 * kPi * static_cast<double>(k) / 32 - alpha;
        cplx v{};
        for (std::size_t l = 0; l < h.length(); ++l) v += h.taps[l] * std::polar(1.0, -w * static_cast<double>(l));
        CHECK(std::abs(S[k] - v) < 1e-12);
    }
}

TEST_CASE("mobility") {
    CHECK(doppler_from_speed(20.0, 2.4e9) == doctest::Approx(44.444444444).epsilon(1e-9));
    const double rho = jakes_correlation(44.44, 115.2e-6);
    CHECK(std::abs(rho - 0.99974) < 5e-6);
    CHECK(jakes_correlation(0.0, 1.0) == 1.0);

    const auto pdp = two_tap_pdp();
    const auto h0 = draw_realization(pdp, 46);
    CHECK(evolve_doppler(h0, pdp, 0.0, 1e-3, 1).taps == h0.taps);
    CHECK_THROWS_AS(evolve_doppler(h0, pdp, -1.0, 1e-3, 1), std::invalid_argument);
    CHECK_THROWS_AS(evolve_doppler(h0, pdp, 10.0, 0.0, 1), std::invalid_argument);

    SUBCASE("variance is preserved over a long run") {
        const auto bu = load_pdp(std::string(GPOFDM_SOURCE_DIR) + "/data/pdp/bu12.pdp");
        Rng rng(47);
        auto h = draw_realization(bu, rng);
        std::vector<double> acc(bu.length(), 0.0);
        double total = 0.0;
        constexpr int kSteps = 10000;
        // dt puts rho near 0.5
        const double dt = 5.447e-3;
        CHECK(std::abs(jakes_correlation(44.44, dt) - 0.5) < 1e-3);
        for (int i = 0; i < kSteps; ++i) {
            h = evolve_doppler(h, bu, 44.44, dt, rng);
            for (std::size_t l = 0; l < h.length(); ++l) acc[l] += std::norm(h.taps[l]);
            total += squared_norm(h.taps);
        }
        CHECK(std::abs(total / kSteps - 1.0) < 0.02);
        for (std::size_t i = 0; i < bu.delays().size(); ++i) {
            const double p = bu.powers()[i];
            CHECK(std::abs(acc[bu.delays()[i]] / kSteps - p) < 0.06 * p);
        }
    }
    SUBCASE("large f_d dt decorrelates") {
        Rng rng(48);
        double cross = 0.0, power = 0.0;
        for (int i = 0; i < 20000; ++i) {
            const auto a = draw_realization(pdp, rng);
            const auto b = evolve_doppler(a, pdp, 1000.0, 0.3827, rng);
            cross += std::real(a.taps[0] * std::conj(b.taps[0]));
            power += std::norm(a.taps[0]);
        }
        CHECK(std::abs(cross / power) < 0.05);
    }
}
