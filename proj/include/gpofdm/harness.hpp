#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "gpofdm/channel.hpp"
#include "gpofdm/chanest.hpp"
#include "gpofdm/guard.hpp"
#include "gpofdm/modem.hpp"
#include "gpofdm/psi_opt.hpp"

namespace gpofdm {

inline constexpr const char* kVersion = "1.0.0";

/// Generalized prefix whose psi the receiver optimizes for the current channel
/// and feeds back to the transmitter.
struct OptimizedPrefix {};

using SchemeChoice = std::variant<CyclicPrefix, ZeroPadding, GeneralizedPrefix, OptimizedPrefix>;

enum class ObjectiveKind { MinPe, MaxMin };

struct FixedTaps {
    ChannelRealization h;
};

using ChannelModel = std::variant<FixedTaps, PowerDelayProfile>;

struct PerfectCsi {};

using Estimation = std::variant<PerfectCsi, BlockPilots, CombPilots>;

struct Mobility {
    double speed_kmh = 0.0;
    double doppler_hz = 0.0;
};

/// Per-point Monte Carlo budget: stop at min_errors bit errors or max_trials
/// trials, whichever comes first.
struct StopRule {
    long long min_errors = 200;
    long long max_trials = 1;
};

/// One Monte Carlo experiment. A trial is one slot of symbols_per_slot OFDM
/// symbols over one channel draw (quasi-static unless mobility is set).
struct SimConfig {
    std::string name = "custom";
    OfdmConfig ofdm;
    SchemeChoice scheme = CyclicPrefix{};
    ChannelModel channel = FixedTaps{ChannelRealization(ComplexSequence{cplx{1.0, 0.0}})};
    std::vector<double> ebno_grid_db;
    ObjectiveKind objective = ObjectiveKind::MinPe;
    double search_tolerance = 1e-3;
    Estimation estimation = PerfectCsi{};
    std::optional<Mobility> mobility;
    std::size_t symbols_per_slot = 7;
    StopRule stop;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Information bits carried by one trial.
long long bits_per_trial(const SimConfig& cfg);

/// max_trials that covers at least `bits` bits.
long long trials_for_bits(const SimConfig& cfg, double bits);

struct TrialResult {
    long long bit_errors = 0;
    long long bits = 0;
};

struct BerPoint {
    double ebno_db = 0.0;
    double ber = 0.0;
    long long bit_errors = 0;
    long long bits = 0;
    long long trials = 0;
    /// No errors were seen; ber holds the 1/bits bound instead of 0.
    bool upper_bound = false;
};

struct BerCurve {
    std::vector<BerPoint> points;
    nlohmann::json metadata;
};

TrialResult run_trial(const SimConfig& cfg, double ebno_db, std::uint64_t seed);

/// Seed used by trial `trial` at Eb/N0 `ebno_db`. Depends only on the config
/// seed and these two coordinates, so schemes run with the same seed see the
/// same channels, bits and noise.
std::uint64_t trial_seed(std::uint64_t base, double ebno_db, long long trial);

/// Runs every grid point. Results do not depend on `threads`.
BerCurve run_sweep(const SimConfig& cfg, unsigned threads = 1);

/// Closed-form average BER over subcarriers for a fixed channel and psi.
double analytic_ber(const ChannelRealization& h, const OfdmConfig& cfg, cplx psi, double ebno_db);

/// Eb/N0 where the curve first drops to `target`, interpolating log10(BER)
/// linearly between grid points. Empty if it never does.
std::optional<double> crossing_ebno(const BerCurve& curve, double target);

// Config and result files.

/// Loads a JSON config. PDP paths resolve relative to the config file.
SimConfig load_config(const std::filesystem::path& path);
SimConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const SimConfig& cfg);

/// Sidecar written next to a results table: "run.csv" -> "run.meta.json".
std::filesystem::path metadata_path(const std::filesystem::path& table);

/// Writes the CSV table (ebno_db,ber,bit_errors,bits) and the JSON sidecar.
void write_results(const BerCurve& curve, const std::filesystem::path& path);
BerCurve read_results(const std::filesystem::path& path);

/// Parses "0:2:40" (start:step:stop, inclusive) or "0,5,10".
std::vector<double> parse_grid(const std::string& text);

/// Parses taps from a file (one "re [im]" per line) or an inline list
/// "0.7071,0.7071" / "0.5:0.1,0.2:-0.3" (re:im pairs).
ChannelRealization parse_taps(const std::string& text);

}  // namespace gpofdm
