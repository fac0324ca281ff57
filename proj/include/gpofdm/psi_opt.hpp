#pragma once

#include <functional>
#include <variant>

#include "gpofdm/channel.hpp"
#include "gpofdm/modem.hpp"

namespace gpofdm {

/// Minimize the average bit error probability at a given Eb/N0 (linear).
struct MinPe {
    double ebno_linear = 1.0;
    int order = 4;
};

/// Maximize the smallest |H_psi[k]|.
struct MaxMin {};

using Objective = std::variant<MinPe, MaxMin>;

struct SearchConfig {
    double lower = 0.0;
    double upper = 1.0;
    double tolerance = 1e-3;
    int max_iterations = 200;
    /// Evaluate a 256-point grid as well and warn on stderr when its minimum
    /// lands more than 2*tolerance away from the search result.
    bool check_unimodal = false;

    void validate() const;
};

struct GoldenSectionResult {
    double argmin = 0.0;
    double lower = 0.0;  // final bracket
    double upper = 0.0;
    int iterations = 0;
    int evaluations = 0;
};

/// Thrown when the bracket is still wider than the tolerance after
/// max_iterations; carries the bracket reached so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}
    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    double lower_;
    double upper_;
};

/// Gaussian tail probability Q(x).
double q_function(double x);

/// Bit error probability of Gray-mapped square M-QAM in AWGN at per-bit SNR
/// gamma_b. Exact for M = 4; the usual nearest-neighbour approximation for
/// M = 16, 64. Clamped to [0, 1/2].
double p_qam(double gamma_b, int order);

/// Average over subcarriers of p_qam((N/(N+K)) Eb/N0 |H_psi[k]|^2) at psi = e^{j alpha}.
double pe_objective(double alpha, const ChannelRealization& h, const OfdmConfig& cfg,
                    double ebno_linear);

/// min_k |H_psi[k]| at psi = e^{j alpha}.
double maxmin_objective(double alpha, const ChannelRealization& h, std::size_t n);

/// Golden section search for a minimum of f on [lower, upper].
///
/// Probes p = b - (b-a)Phi and q = a + (b-a)Phi, keeps [a, q] when
/// f(p) <= f(q) and [p, b] otherwise, and reuses the surviving probe value
/// so every iteration costs one new evaluation. Stops once b - a < tolerance
/// and returns the bracket midpoint.
GoldenSectionResult golden_section(const std::function<double(double)>& f, const SearchConfig& cfg);

struct PsiOptimum {
    double alpha = 0.0;
    cplx psi{1.0, 0.0};
    /// Pe for MinPe, min_k |H_psi[k]| for MaxMin.
    double objective_value = 0.0;
    int iterations = 0;
};

/// Default search space [0, 2 pi / N], tolerance 1e-3.
SearchConfig default_search(std::size_t n, double tolerance = 1e-3);

/// Runs the golden section search for the selected objective. Any alpha + 2 pi m / N
/// is equivalent to the returned one.
PsiOptimum optimize_psi(const ChannelRealization& h, const OfdmConfig& cfg, const Objective& obj,
                        const SearchConfig& search);

/// Complex multiplication counts for the generalized prefix system.
struct CmBudget {
    long long tx_cm = 0;
    long long rx_fixed_cm = 0;
    long long per_iteration_cm = 0;
    long long total_cm = 0;
};

/// tx = 2N + K, rx = 2N, per iteration N + L - 1 + N log2 N (MinPe) or
/// L - 1 + N log2 N (MaxMin), total = tx + rx + Z * per iteration.
CmBudget cm_budget(const OfdmConfig& cfg, std::size_t taps, long long iterations, const Objective& obj);

}  // namespace gpofdm
