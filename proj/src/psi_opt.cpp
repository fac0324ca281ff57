#include "gpofdm/psi_opt.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "gpofdm/spectral.hpp"

namespace gpofdm {

namespace {

constexpr double kGoldenConjugate = 0.61803398874989484820;  // (sqrt(5) - 1) / 2

long long ceil_log2(std::size_t n) {
    long long bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return bits;
}

// log Q(x), finite far past the point where Q itself underflows
double log_q(double x) {
    if (x < 30.0) return std::log(0.5 * std::erfc(x / std::sqrt(2.0)));
    const double r = 1.0 / (x * x);
    const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    return -0.5 * x * x - std::log(x * std::sqrt(2.0 * kPi)) + std::log(series);
}

double log_p_qam(double gamma_b, int order) {
    const double g = std::max(gamma_b, 0.0);
    double lp = 0.0;
    if (order == 4) {
        lp = log_q(std::sqrt(2.0 * g));
    } else {
        const double m = order;
        const double bits = std::log2(m);
        lp = std::log(4.0 / bits * (1.0 - 1.0 / std::sqrt(m))) + log_q(std::sqrt(3.0 * bits * g / (m - 1.0)));
    }
    return std::min(lp, std::log(0.5));
}

// log of pe_objective, by log-sum-exp over subcarriers. Same minimizer, but
// it keeps ranking candidates at high Eb/N0 where every term underflows.
double log_pe_objective(double alpha, const ChannelRealization& h, const OfdmConfig& cfg, double ebno_linear) {
    const auto hpsi = shifted_frequency_response(h, cfg.n, std::polar(1.0, alpha));
    const double snr = cfg.overhead_factor() * ebno_linear;
    std::vector<double> terms(hpsi.size());
    for (std::size_t k = 0; k < hpsi.size(); ++k)
        terms[k] = log_p_qam(snr * std::norm(hpsi[k]), cfg.constellation.order());
    const double top = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc / static_cast<double>(cfg.n));
}

}  // namespace

void SearchConfig::validate() const {
    if (!(lower < upper)) throw std::invalid_argument("SearchConfig: lower must be below upper");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SearchConfig: tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("SearchConfig: max_iterations must be >= 1");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double p_qam(double gamma_b, int order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("p_qam: unsupported constellation order " + std::to_string(order));
    if (std::isnan(gamma_b)) throw std::invalid_argument("p_qam: SNR is NaN");
    const double g = std::max(gamma_b, 0.0);
    double p = 0.0;
    if (order == 4) {
        p = q_function(std::sqrt(2.0 * g));
    } else {
        const double m = order;
        const double bits = std::log2(m);
        p = 4.0 / bits * (1.0 - 1.0 / std::sqrt(m)) * q_function(std::sqrt(3.0 * bits * g / (m - 1.0)));
    }
    return std::clamp(p, 0.0, 0.5);
}

double pe_objective(double alpha, const ChannelRealization& h, const OfdmConfig& cfg,
                    double ebno_linear) {
    const auto hpsi = shifted_frequency_response(h, cfg.n, std::polar(1.0, alpha));
    const double snr = cfg.overhead_factor() * ebno_linear;
    double acc = 0.0;
    for (const auto& v : hpsi) acc += p_qam(snr * std::norm(v), cfg.constellation.order());
    return acc / static_cast<double>(cfg.n);
}

double maxmin_objective(double alpha, const ChannelRealization& h, std::size_t n) {
    const auto hpsi = shifted_frequency_response(h, n, std::polar(1.0, alpha));
    double smallest = std::abs(hpsi.front());
    for (const auto& v : hpsi) smallest = std::min(smallest, std::abs(v));
    return smallest;
}

GoldenSectionResult golden_section(const std::function<double(double)>& f, const SearchConfig& cfg) {
    cfg.validate();
    double a = cfg.lower;
    double b = cfg.upper;
    double p = b - (b - a) * kGoldenConjugate;
    double q = a + (b - a) * kGoldenConjugate;
    double fp = f(p);
    double fq = f(q);
    GoldenSectionResult r;
    r.evaluations = 2;
    while (b - a >= cfg.tolerance) {
        if (r.iterations >= cfg.max_iterations)
            throw ConvergenceError("golden_section: no convergence after " +
                                       std::to_string(cfg.max_iterations) + " iterations",
                                   a, b);
        if (fp <= fq) {
            b = q;
            q = p;
            p = b - (b - a) * kGoldenConjugate;
            fq = fp;
            fp = f(p);
        } else {
            a = p;
            p = q;
            q = a + (b - a) * kGoldenConjugate;
            fp = fq;
            fq = f(q);
        }
        ++r.iterations;
        ++r.evaluations;
    }
    r.lower = a;
    r.upper = b;
    r.argmin = 0.5 * (a + b);

    if (cfg.check_unimodal) {
        constexpr int kGrid = 256;
        double best_x = cfg.lower;
        double best_f = f(best_x);
        for (int i = 1; i < kGrid; ++i) {
            const double x = cfg.lower + (cfg.upper - cfg.lower) * i / (kGrid - 1);
            const double fx = f(x);
            if (fx < best_f) {
                best_f = fx;
                best_x = x;
            }
        }
        if (std::abs(best_x - r.argmin) > 2.0 * cfg.tolerance)
            std::cerr << "warning: golden_section result " << r.argmin << " differs from grid minimum "
                      << best_x << "; objective may not be unimodal on [" << cfg.lower << ", "
                      << cfg.upper << "]\n";
    }
    return r;
}

SearchConfig default_search(std::size_t n, double tolerance) {
    SearchConfig s;
    s.lower = 0.0;
    s.upper = 2.0 * kPi / static_cast<double>(n);
    s.tolerance = tolerance;
    return s;
}

PsiOptimum optimize_psi(const ChannelRealization& h, const OfdmConfig& cfg, const Objective& obj,
                        const SearchConfig& search) {
    PsiOptimum out;
    if (const auto* minpe = std::get_if<MinPe>(&obj)) {
        if (!(minpe->ebno_linear > 0.0))
            throw std::invalid_argument("optimize_psi: MinPe needs a positive Eb/N0");
        OfdmConfig c = cfg;
        if (minpe->order != cfg.constellation.order()) c.constellation = QamConstellation(minpe->order);
        const auto f = [&](double a) { return log_pe_objective(a, h, c, minpe->ebno_linear); };
        const auto r = golden_section(f, search);
        out.alpha = r.argmin;
        out.iterations = r.iterations;
        out.objective_value = pe_objective(r.argmin, h, c, minpe->ebno_linear);
    } else {
        const auto f = [&](double a) { return -maxmin_objective(a, h, cfg.n); };
        const auto r = golden_section(f, search);
        out.alpha = r.argmin;
        out.iterations = r.iterations;
        out.objective_value = -f(r.argmin);
    }
    out.psi = std::polar(1.0, out.alpha);
    return out;
}

CmBudget cm_budget(const OfdmConfig& cfg, std::size_t taps, long long iterations, const Objective& obj) {
    if (iterations < 1) throw std::invalid_argument("cm_budget: iteration count must be >= 1");
    if (taps < 1) throw std::invalid_argument("cm_budget: channel must have at least one tap");
    const auto n = static_cast<long long>(cfg.n);
    const auto k = static_cast<long long>(cfg.k);
    const auto l = static_cast<long long>(taps);
    CmBudget b;
    b.tx_cm = 2 * n + k;
    b.rx_fixed_cm = 2 * n;
    const long long fft = n * ceil_log2(cfg.n);
    b.per_iteration_cm = std::holds_alternative<MinPe>(obj) ? n + l - 1 + fft : l - 1 + fft;
    b.total_cm = b.tx_cm + b.rx_fixed_cm + iterations * b.per_iteration_cm;
    return b;
}

}  // namespace gpofdm
