#include "gpofdm/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

#include "gpofdm/detect.hpp"
#include "gpofdm/spectral.hpp"

namespace gpofdm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

BitSequence random_bits(Rng& rng, std::size_t count) {
    BitSequence bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

PrefixScheme prefix_for(cplx psi) {
    if (psi == cplx{1.0, 0.0}) return CyclicPrefix{};
    return GeneralizedPrefix(psi);
}

// The receiver-side view of the channel used to pick psi: the time-domain
// response behind an estimate of H_psi_tx, with the psi_tx rotation undone and
// everything past the guard-bounded support (K+1 taps) dropped.
ChannelRealization impulse_from_estimate(std::span<const cplx> h_est, cplx psi_tx, std::size_t k) {
    auto taps = idft(h_est);
    taps.resize(std::min(taps.size(), k + 1));
    if (psi_tx != cplx{1.0, 0.0}) {
        const auto undo = d_matrix(std::conj(psi_tx), taps.size());
        for (std::size_t i = 0; i < taps.size(); ++i) taps[i] *= undo[i];
    }
    return ChannelRealization(std::move(taps));
}

ZpDetector make_zp_detector(const ChannelRealization& h, std::size_t n) {
    try {
        return ZpDetector(h, n, ZpWindow::Stripped);
    } catch (const SingularMatrixError&) {
        return ZpDetector(h, n, ZpWindow::Full);
    }
}

// ZP detectors cost an N x N factorization; fixed channels reuse the last one.
const ZpDetector& zp_detector_for(const ChannelRealization& h, std::size_t n) {
    thread_local std::optional<std::pair<ComplexSequence, ZpDetector>> cache;
    if (!cache || cache->first != h.taps || cache->second.equalizer().rows() != static_cast<Eigen::Index>(n))
        cache.emplace(h.taps, make_zp_detector(h, n));
    return cache->second;
}

long long count_errors(std::span<const std::uint8_t> sent, std::span<const std::uint8_t> got) {
    long long errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) errors += sent[i] != got[i];
    return errors;
}

class TrialRunner {
public:
    TrialRunner(const SimConfig& cfg, double ebno_db, std::uint64_t seed)
        : cfg_(cfg),
          n_(cfg.ofdm.n),
          k_(cfg.ofdm.k),
          qam_(cfg.ofdm.constellation),
          bps_(static_cast<std::size_t>(qam_.bits_per_symbol())),
          chan_rng_(derive_seed(seed, 1)),
          bit_rng_(derive_seed(seed, 2)),
          noise_rng_(derive_seed(seed, 3)),
          noise_{ebno_db, qam_.bits_per_symbol(), cfg.ofdm.overhead_factor(), cfg.ofdm.n},
          ebno_linear_(std::pow(10.0, ebno_db / 10.0)) {}

    TrialResult run() {
        pdp_ = std::get_if<PowerDelayProfile>(&cfg_.channel);
        h_ = pdp_ ? draw_realization(*pdp_, chan_rng_) : std::get<FixedTaps>(cfg_.channel).h;
        const double doppler = cfg_.mobility ? cfg_.mobility->doppler_hz : 0.0;
        const double dt = static_cast<double>(n_ + k_) / cfg_.ofdm.sample_rate_hz;

        std::visit(overloaded{[&](const PerfectCsi&) { run_perfect(doppler, dt); },
                              [&](const BlockPilots& p) { run_block(p, doppler, dt); },
                              [&](const CombPilots& p) { run_comb(p, doppler, dt); }},
                   cfg_.estimation);
        return result_;
    }

private:
    const SimConfig& cfg_;
    std::size_t n_, k_;
    const QamConstellation& qam_;
    std::size_t bps_;
    Rng chan_rng_, bit_rng_, noise_rng_;
    NoiseConfig noise_;
    double ebno_linear_;
    const PowerDelayProfile* pdp_ = nullptr;
    ChannelRealization h_;
    TrialResult result_;

    bool zero_padded() const { return std::holds_alternative<ZeroPadding>(cfg_.scheme); }
    bool optimized() const { return std::holds_alternative<OptimizedPrefix>(cfg_.scheme); }

    cplx fixed_psi() const {
        if (const auto* g = std::get_if<GeneralizedPrefix>(&cfg_.scheme)) return g->psi();
        return {1.0, 0.0};
    }

    void advance_channel(std::size_t symbol, double doppler, double dt) {
        if (symbol > 0 && doppler > 0.0) h_ = evolve_doppler(h_, *pdp_, doppler, dt, chan_rng_);
    }

    cplx choose_psi(const ChannelRealization& h) const {
        SearchConfig search = default_search(n_, cfg_.search_tolerance);
        Objective obj = MaxMin{};
        if (cfg_.objective == ObjectiveKind::MinPe) obj = MinPe{ebno_linear_, qam_.order()};
        return optimize_psi(h, cfg_.ofdm, obj, search).psi;
    }

    // Transmits one frequency-domain symbol and returns the received window
    // after guard removal. For ZP that is every time sample from K on (the
    // detector reads as many as its window needs); otherwise the demodulated
    // symbol.
    ComplexSequence transmit(const ComplexSequence& x_freq, cplx psi) {
        if (zero_padded()) {
            const auto tx = add_prefix(ofdm_modulate(x_freq, cplx{1.0, 0.0}), k_, ZeroPadding{});
            auto rx = apply_channel(tx, h_, noise_, noise_rng_);
            return ComplexSequence(rx.begin() + static_cast<std::ptrdiff_t>(k_), rx.end());
        }
        const auto tx = add_prefix(ofdm_modulate(x_freq, psi), k_, prefix_for(psi));
        const auto rx = strip_guard(apply_channel(tx, h_, noise_, noise_rng_), n_, k_);
        return ofdm_demodulate(rx, psi);
    }

    void count(std::span<const std::uint8_t> sent, const ComplexSequence& estimates) {
        const auto got = demap_symbols(estimates, qam_);
        result_.bit_errors += count_errors(sent, got);
        result_.bits += static_cast<long long>(sent.size());
    }

    void run_perfect(double doppler, double dt) {
        cplx psi = fixed_psi();
        for (std::size_t s = 0; s < cfg_.symbols_per_slot; ++s) {
            advance_channel(s, doppler, dt);
            if (optimized() && (s == 0 || doppler > 0.0)) psi = choose_psi(h_);
            const auto bits = random_bits(bit_rng_, n_ * bps_);
            const auto x = map_bits(bits, qam_);
            const auto rx = transmit(x, psi);
            if (zero_padded()) {
                count(bits, zp_detector_for(h_, n_).detect(rx));
            } else {
                count(bits, zf_detect(rx, shifted_frequency_response(h_, n_, psi)).symbols);
            }
        }
    }

    void run_block(const BlockPilots& plan, double doppler, double dt) {
        // symbol 0 carries pilots on every bin; the estimate (and psi) is
        // frozen for the rest of the slot
        const cplx pilot_psi = fixed_psi();
        const ComplexSequence pilots(n_, plan.pilot_value);
        const auto y_pilot = transmit(pilots, pilot_psi);
        auto h_est = ls_estimate_block(y_pilot, pilots);
        cplx psi = pilot_psi;
        if (optimized()) {
            const auto h_time = impulse_from_estimate(h_est, pilot_psi, k_);
            psi = choose_psi(h_time);
            h_est = shifted_frequency_response(h_time, n_, psi);
        }
        for (std::size_t s = 1; s < cfg_.symbols_per_slot; ++s) {
            advance_channel(s, doppler, dt);
            const auto bits = random_bits(bit_rng_, n_ * bps_);
            const auto rx = transmit(map_bits(bits, qam_), psi);
            count(bits, zf_detect(rx, h_est).symbols);
        }
    }

    void run_comb(const CombPilots& plan, double doppler, double dt) {
        const auto data = data_bins(plan, n_);
        cplx psi = fixed_psi();
        for (std::size_t s = 0; s < cfg_.symbols_per_slot; ++s) {
            advance_channel(s, doppler, dt);
            const auto bits = random_bits(bit_rng_, data.size() * bps_);
            const auto symbols = map_bits(bits, qam_);
            ComplexSequence x(n_, plan.pilot_value);
            for (std::size_t i = 0; i < data.size(); ++i) x[data[i]] = symbols[i];

            const auto rx = transmit(x, psi);
            const auto h_est = ls_estimate_comb(rx, plan);
            const auto eq = zf_detect(rx, h_est).symbols;
            ComplexSequence estimates(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) estimates[i] = eq[data[i]];
            count(bits, estimates);

            // psi for the next symbol is fed back from this symbol's estimate
            if (optimized()) psi = choose_psi(impulse_from_estimate(h_est, psi, k_));
        }
    }
};

}  // namespace

void SimConfig::validate() const {
    ofdm.validate();
    if (ebno_grid_db.empty()) throw std::invalid_argument("SimConfig: Eb/N0 grid is empty");
    for (std::size_t i = 1; i < ebno_grid_db.size(); ++i)
        if (!(ebno_grid_db[i] > ebno_grid_db[i - 1]))
            throw std::invalid_argument("SimConfig: Eb/N0 grid must be strictly increasing");
    if (stop.min_errors < 1) throw std::invalid_argument("SimConfig: min_errors must be >= 1");
    if (stop.max_trials < 1) throw std::invalid_argument("SimConfig: max_trials must be >= 1");
    if (symbols_per_slot < 1) throw std::invalid_argument("SimConfig: symbols_per_slot must be >= 1");
    if (!(search_tolerance > 0.0)) throw std::invalid_argument("SimConfig: search tolerance must be positive");

    const std::size_t taps = std::visit(
        overloaded{[](const FixedTaps& f) { return f.h.length(); },
                   [](const PowerDelayProfile& p) { return p.length(); }},
        channel);
    if (taps > ofdm.k + 1)
        throw std::invalid_argument("SimConfig: channel of " + std::to_string(taps) +
                                    " taps exceeds the guard (needs L <= K+1 = " +
                                    std::to_string(ofdm.k + 1) + ")");

    if (!std::holds_alternative<PerfectCsi>(estimation)) {
        if (std::holds_alternative<ZeroPadding>(scheme))
            throw std::invalid_argument("SimConfig: zero padding is only simulated with perfect CSI");
        const PilotPlan plan = std::holds_alternative<BlockPilots>(estimation)
                                   ? PilotPlan{std::get<BlockPilots>(estimation)}
                                   : PilotPlan{std::get<CombPilots>(estimation)};
        validate_plan(plan, ofdm.n);
        if (const auto* b = std::get_if<BlockPilots>(&estimation); b && b->symbols_per_slot != symbols_per_slot)
            throw std::invalid_argument("SimConfig: block pilot slot length differs from symbols_per_slot");
    }
    if (mobility) {
        if (mobility->doppler_hz < 0.0) throw std::invalid_argument("SimConfig: negative Doppler");
        if (!std::holds_alternative<PowerDelayProfile>(channel) && mobility->doppler_hz > 0.0)
            throw std::invalid_argument("SimConfig: mobility needs a power delay profile channel");
    }
}

long long bits_per_trial(const SimConfig& cfg) {
    const auto bps = static_cast<long long>(cfg.ofdm.constellation.bits_per_symbol());
    const auto n = static_cast<long long>(cfg.ofdm.n);
    const auto slot = static_cast<long long>(cfg.symbols_per_slot);
    return std::visit(overloaded{[&](const PerfectCsi&) { return slot * n * bps; },
                                 [&](const BlockPilots&) { return (slot - 1) * n * bps; },
                                 [&](const CombPilots& c) {
                                     return slot * (n - n / static_cast<long long>(c.spacing)) * bps;
                                 }},
                      cfg.estimation);
}

long long trials_for_bits(const SimConfig& cfg, double bits) {
    const auto per = static_cast<double>(bits_per_trial(cfg));
    return std::max(1LL, static_cast<long long>(std::ceil(bits / per)));
}

TrialResult run_trial(const SimConfig& cfg, double ebno_db, std::uint64_t seed) {
    return TrialRunner(cfg, ebno_db, seed).run();
}

std::uint64_t trial_seed(std::uint64_t base, double ebno_db, long long trial) {
    return derive_seed(base, std::bit_cast<std::uint64_t>(ebno_db), static_cast<std::uint64_t>(trial));
}

BerCurve run_sweep(const SimConfig& cfg, unsigned threads) {
    cfg.validate();
    threads = std::max(1u, threads);
    constexpr long long kBatch = 64;

    BerCurve curve;
    curve.metadata = nlohmann::json{{"version", kVersion}, {"config", config_to_json(cfg)}};
    for (double ebno : cfg.ebno_grid_db) {
        BerPoint point;
        point.ebno_db = ebno;
        bool done = false;
        for (long long first = 0; !done && first < cfg.stop.max_trials; first += kBatch) {
            const long long count = std::min(kBatch, cfg.stop.max_trials - first);
            std::vector<TrialResult> results(static_cast<std::size_t>(count));
            std::vector<std::exception_ptr> errors(threads);
            auto worker = [&](unsigned t) {
                try {
                    for (long long i = t; i < count; i += threads)
                        results[static_cast<std::size_t>(i)] =
                            run_trial(cfg, ebno, trial_seed(cfg.seed, ebno, first + i));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            };
            if (threads == 1) {
                worker(0);
            } else {
                std::vector<std::thread> pool;
                for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
                for (auto& th : pool) th.join();
            }
            for (const auto& e : errors)
                if (e) std::rethrow_exception(e);
            // accumulate in trial order so the stopping trial is independent of scheduling
            for (const auto& r : results) {
                point.bit_errors += r.bit_errors;
                point.bits += r.bits;
                ++point.trials;
                if (point.bit_errors >= cfg.stop.min_errors) {
                    done = true;
                    break;
                }
            }
        }
        if (point.bit_errors == 0) {
            point.upper_bound = true;
            point.ber = point.bits > 0 ? 1.0 / static_cast<double>(point.bits) : 1.0;
        } else {
            point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.bits);
        }
        curve.points.push_back(point);
    }
    return curve;
}

double analytic_ber(const ChannelRealization& h, const OfdmConfig& cfg, cplx psi, double ebno_db) {
    if (!is_unit_modulus(psi)) throw std::invalid_argument("analytic_ber: |psi| must be 1");
    return pe_objective(std::arg(psi), h, cfg, std::pow(10.0, ebno_db / 10.0));
}

std::optional<double> crossing_ebno(const BerCurve& curve, double target) {
    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].ber > target) continue;
        if (i == 0) return pts[0].ebno_db;
        const double y0 = std::log10(pts[i - 1].ber);
        const double y1 = std::log10(pts[i].ber);
        const double yt = std::log10(target);
        if (y0 == y1) return pts[i].ebno_db;
        return pts[i - 1].ebno_db + (y0 - yt) / (y0 - y1) * (pts[i].ebno_db - pts[i - 1].ebno_db);
    }
    return std::nullopt;
}

}  // namespace gpofdm
