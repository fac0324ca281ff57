#include <cmath>
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gpofdm/harness.hpp"

using namespace gpofdm;

namespace {

SchemeChoice parse_scheme(const std::string& text) {
    if (text == "cyclic") return CyclicPrefix{};
    if (text == "zeropad") return ZeroPadding{};
    if (text == "optimized") return OptimizedPrefix{};
    if (text.rfind("generalized:", 0) == 0) return GeneralizedPrefix::from_alpha(std::stod(text.substr(12)));
    throw std::invalid_argument("scheme must be cyclic, zeropad, optimized or generalized:<alpha>");
}

Objective make_objective(const std::string& name, double ebno_db, int order) {
    if (name == "maxmin") return MaxMin{};
    return MinPe{std::pow(10.0, ebno_db / 10.0), order};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized-prefix OFDM link simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo BER sweep from a JSON config");
    std::string config_path, out_path, scheme_override;
    std::uint64_t seed = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    sweep->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_path, "results table (CSV); the sidecar gets .meta.json")->required();
    auto* seed_opt = sweep->add_option("--seed", seed, "override the config seed");
    sweep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--scheme", scheme_override, "override: cyclic|zeropad|optimized|generalized:<alpha>");

    auto* optimize = app.add_subcommand("optimize", "Optimal psi for a fixed channel");
    std::string taps_text, objective_name = "minpe";
    std::size_t n = 64, k = 0;
    int order = 4;
    double ebno_db = 30.0, tolerance = 1e-3;
    optimize->add_option("--taps", taps_text, "tap file or inline list (a,b or re:im,...)")->required();
    optimize->add_option("--n", n, "subcarriers")->required();
    optimize->add_option("--k", k, "guard length (default N/4)");
    optimize->add_option("--objective", objective_name)->check(CLI::IsMember({"minpe", "maxmin"}));
    optimize->add_option("--ebno-db", ebno_db, "operating point for minpe");
    optimize->add_option("--order", order, "QAM order")->check(CLI::IsMember({4, 16, 64}));
    optimize->add_option("--tolerance", tolerance, "search tolerance (rad)");

    auto* analytic = app.add_subcommand("analytic", "Closed-form BER for a fixed channel and psi");
    double alpha = 0.0;
    std::string grid_text;
    analytic->add_option("--taps", taps_text)->required();
    analytic->add_option("--n", n)->required();
    analytic->add_option("--k", k)->required();
    analytic->add_option("--alpha", alpha, "psi = exp(j alpha)");
    analytic->add_option("--ebno-grid", grid_text, "start:step:stop or a,b,c (dB)")->required();
    analytic->add_option("--order", order)->check(CLI::IsMember({4, 16, 64}));

    auto* budget = app.add_subcommand("budget", "Complex multiplication counts");
    std::size_t taps_count = 1;
    long long iterations = 1;
    budget->add_option("--n", n)->required();
    budget->add_option("--k", k)->required();
    budget->add_option("--l", taps_count, "channel taps")->required();
    budget->add_option("--z", iterations, "search iterations")->required();
    budget->add_option("--objective", objective_name)->check(CLI::IsMember({"minpe", "maxmin"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            SimConfig cfg = load_config(config_path);
            if (*seed_opt) cfg.seed = seed;
            if (!scheme_override.empty()) cfg.scheme = parse_scheme(scheme_override);
            const auto curve = run_sweep(cfg, threads);
            write_results(curve, out_path);
            for (const auto& p : curve.points)
                std::printf("%6.2f dB  ber %-12.6g %s(%lld errors / %lld bits)\n", p.ebno_db, p.ber,
                            p.upper_bound ? "<= " : "", p.bit_errors, p.bits);
            std::printf("wrote %s and %s\n", out_path.c_str(), metadata_path(out_path).c_str());
        } else if (*optimize) {
            const auto h = parse_taps(taps_text);
            const OfdmConfig cfg(n, k ? k : n / 4, order);
            const auto opt = optimize_psi(h, cfg, make_objective(objective_name, ebno_db, order),
                                          default_search(n, tolerance));
            std::printf("alpha* = %.9f\npsi*   = %.9f %+.9fj\nobjective = %.9g\niterations = %d\n", opt.alpha,
                        opt.psi.real(), opt.psi.imag(), opt.objective_value, opt.iterations);
        } else if (*analytic) {
            const auto h = parse_taps(taps_text);
            const OfdmConfig cfg(n, k, order);
            const cplx psi = std::polar(1.0, alpha);
            std::printf("ebno_db,ber\n");
            for (double e : parse_grid(grid_text)) std::printf("%.17g,%.17g\n", e, analytic_ber(h, cfg, psi, e));
        } else if (*budget) {
            const OfdmConfig cfg(n, k, 4);
            const auto b = cm_budget(cfg, taps_count, iterations, make_objective(objective_name, 0.0, 4));
            std::printf("tx_cm %lld\nrx_fixed_cm %lld\nper_iteration_cm %lld\ntotal_cm %lld\n", b.tx_cm,
                        b.rx_fixed_cm, b.per_iteration_cm, b.total_cm);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
