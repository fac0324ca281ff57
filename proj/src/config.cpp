#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gpofdm/harness.hpp"

namespace gpofdm {

namespace {

using nlohmann::json;

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("config: expected a number or [re, im], got " + j.dump());
}

std::vector<double> grid_from_json(const json& j) {
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_object()) {
        const double start = j.at("start").get<double>();
        const double stop = j.at("stop").get<double>();
        const double step = j.at("step").get<double>();
        if (!(step > 0.0)) throw std::invalid_argument("config: grid step must be positive");
        std::vector<double> g;
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= count; ++i) g.push_back(start + static_cast<double>(i) * step);
        return g;
    }
    if (j.is_string()) return parse_grid(j.get<std::string>());
    throw std::invalid_argument("config: ebno_grid_db must be a list, {start,stop,step} or a string");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SimConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    SimConfig cfg;
    cfg.name = j.value("name", "custom");

    const json& o = j.at("ofdm");
    cfg.ofdm = OfdmConfig(o.at("n").get<std::size_t>(), o.at("k").get<std::size_t>(),
                          o.value("order", 4), o.value("sample_rate_hz", 5.0e6));

    const json& s = j.at("scheme");
    const std::string type = s.is_string() ? s.get<std::string>() : s.at("type").get<std::string>();
    if (type == "cyclic") {
        cfg.scheme = CyclicPrefix{};
    } else if (type == "zeropad") {
        cfg.scheme = ZeroPadding{};
    } else if (type == "generalized") {
        cfg.scheme = GeneralizedPrefix::from_alpha(s.at("alpha").get<double>());
    } else if (type == "optimized") {
        cfg.scheme = OptimizedPrefix{};
    } else {
        throw std::invalid_argument("config: unknown scheme '" + type + "'");
    }

    const std::string objective = j.value("objective", "minpe");
    if (objective == "minpe")
        cfg.objective = ObjectiveKind::MinPe;
    else if (objective == "maxmin")
        cfg.objective = ObjectiveKind::MaxMin;
    else
        throw std::invalid_argument("config: objective must be minpe or maxmin");
    cfg.search_tolerance = j.value("search_tolerance", 1e-3);

    const json& c = j.at("channel");
    if (c.contains("taps")) {
        ComplexSequence taps;
        for (const auto& t : c.at("taps")) taps.push_back(complex_from_json(t));
        cfg.channel = FixedTaps{ChannelRealization(std::move(taps))};
    } else if (c.contains("pdp")) {
        const json& p = c.at("pdp");
        if (p.is_string()) {
            std::filesystem::path path = p.get<std::string>();
            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
            cfg.channel = load_pdp(path);
        } else {
            cfg.channel = PowerDelayProfile(p.at("name").get<std::string>(),
                                            p.at("sample_period_us").get<double>(),
                                            p.at("delays").get<std::vector<std::size_t>>(),
                                            p.at("powers").get<std::vector<double>>());
        }
    } else {
        throw std::invalid_argument("config: channel needs 'taps' or 'pdp'");
    }

    cfg.ebno_grid_db = grid_from_json(j.at("ebno_grid_db"));
    cfg.symbols_per_slot = j.value("symbols_per_slot", std::size_t{7});

    const json e = j.value("estimation", json{{"type", "perfect"}});
    const std::string etype = e.is_string() ? e.get<std::string>() : e.at("type").get<std::string>();
    if (etype == "perfect") {
        cfg.estimation = PerfectCsi{};
    } else if (etype == "block") {
        BlockPilots b;
        b.symbols_per_slot = cfg.symbols_per_slot;
        if (e.is_object() && e.contains("pilot")) b.pilot_value = complex_from_json(e.at("pilot"));
        cfg.estimation = b;
    } else if (etype == "comb") {
        CombPilots cp;
        if (e.is_object()) {
            cp.spacing = e.value("spacing", std::size_t{4});
            if (e.contains("pilot")) cp.pilot_value = complex_from_json(e.at("pilot"));
        }
        cfg.estimation = cp;
    } else {
        throw std::invalid_argument("config: estimation must be perfect, block or comb");
    }

    if (j.contains("mobility") && !j.at("mobility").is_null()) {
        const json& m = j.at("mobility");
        Mobility mob;
        mob.speed_kmh = m.value("speed_kmh", 0.0);
        if (m.contains("doppler_hz"))
            mob.doppler_hz = m.at("doppler_hz").get<double>();
        else
            mob.doppler_hz = doppler_from_speed(mob.speed_kmh, m.value("carrier_hz", 2.4e9));
        cfg.mobility = mob;
    }

    cfg.seed = j.value("seed", std::uint64_t{1});
    const json st = j.value("stop", json::object());
    cfg.stop.min_errors = st.value("min_errors", 200LL);
    if (st.contains("max_trials"))
        cfg.stop.max_trials = st.at("max_trials").get<long long>();
    else
        cfg.stop.max_trials = trials_for_bits(cfg, st.value("max_bits", 1e7));

    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

json config_to_json(const SimConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["ofdm"] = {{"n", cfg.ofdm.n},
                 {"k", cfg.ofdm.k},
                 {"order", cfg.ofdm.constellation.order()},
                 {"sample_rate_hz", cfg.ofdm.sample_rate_hz}};
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CyclicPrefix>) j["scheme"] = {{"type", "cyclic"}};
            if constexpr (std::is_same_v<S, ZeroPadding>) j["scheme"] = {{"type", "zeropad"}};
            if constexpr (std::is_same_v<S, OptimizedPrefix>) j["scheme"] = {{"type", "optimized"}};
            if constexpr (std::is_same_v<S, GeneralizedPrefix>)
                j["scheme"] = {{"type", "generalized"}, {"alpha", s.alpha()}};
        },
        cfg.scheme);
    j["objective"] = cfg.objective == ObjectiveKind::MinPe ? "minpe" : "maxmin";
    j["search_tolerance"] = cfg.search_tolerance;
    if (const auto* f = std::get_if<FixedTaps>(&cfg.channel)) {
        json taps = json::array();
        for (const auto& t : f->h.taps) taps.push_back(complex_to_json(t));
        j["channel"] = {{"taps", taps}};
    } else {
        const auto& p = std::get<PowerDelayProfile>(cfg.channel);
        j["channel"] = {{"pdp",
                         {{"name", p.name()},
                          {"sample_period_us", p.sample_period_us()},
                          {"delays", p.delays()},
                          {"powers", p.powers()}}}};
    }
    j["ebno_grid_db"] = cfg.ebno_grid_db;
    j["symbols_per_slot"] = cfg.symbols_per_slot;
    std::visit(
        [&](const auto& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, PerfectCsi>) j["estimation"] = {{"type", "perfect"}};
            if constexpr (std::is_same_v<E, BlockPilots>)
                j["estimation"] = {{"type", "block"}, {"pilot", complex_to_json(e.pilot_value)}};
            if constexpr (std::is_same_v<E, CombPilots>)
                j["estimation"] = {
                    {"type", "comb"}, {"spacing", e.spacing}, {"pilot", complex_to_json(e.pilot_value)}};
        },
        cfg.estimation);
    if (cfg.mobility)
        j["mobility"] = {{"speed_kmh", cfg.mobility->speed_kmh}, {"doppler_hz", cfg.mobility->doppler_hz}};
    j["stop"] = {{"min_errors", cfg.stop.min_errors}, {"max_trials", cfg.stop.max_trials}};
    j["seed"] = cfg.seed;
    return j;
}

std::filesystem::path metadata_path(const std::filesystem::path& table) {
    auto p = table;
    p.replace_extension(".meta.json");
    return p;
}

void write_results(const BerCurve& curve, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write results table: " + path.string());
        out << "ebno_db,ber,bit_errors,bits\n";
        for (const auto& p : curve.points)
            out << format_double(p.ebno_db) << ',' << format_double(p.ber) << ',' << p.bit_errors << ','
                << p.bits << '\n';
        if (!out) throw std::runtime_error("write failed: " + path.string());
    }
    json meta = curve.metadata.is_null() ? json::object() : curve.metadata;
    json points = json::array();
    for (const auto& p : curve.points)
        points.push_back({{"ebno_db", p.ebno_db},
                          {"ber", p.ber},
                          {"bit_errors", p.bit_errors},
                          {"bits", p.bits},
                          {"trials", p.trials},
                          {"upper_bound", p.upper_bound}});
    meta["points"] = points;
    const auto mpath = metadata_path(path);
    std::ofstream out(mpath, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write results metadata: " + mpath.string());
    out << meta.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + mpath.string());
}

BerCurve read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results table: " + path.string());
    BerCurve curve;
    std::string line;
    std::getline(in, line);
    if (line != "ebno_db,ber,bit_errors,bits")
        throw std::invalid_argument(path.string() + ": unexpected header '" + line + "'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        BerPoint p;
        std::string field;
        std::getline(ls, field, ',');
        p.ebno_db = std::stod(field);
        std::getline(ls, field, ',');
        p.ber = std::stod(field);
        std::getline(ls, field, ',');
        p.bit_errors = std::stoll(field);
        std::getline(ls, field, ',');
        p.bits = std::stoll(field);
        curve.points.push_back(p);
    }
    const auto mpath = metadata_path(path);
    if (std::ifstream m(mpath); m) {
        m >> curve.metadata;
        const auto& pts = curve.metadata.value("points", json::array());
        for (std::size_t i = 0; i < std::min(pts.size(), curve.points.size()); ++i) {
            curve.points[i].trials = pts[i].value("trials", 0LL);
            curve.points[i].upper_bound = pts[i].value("upper_bound", false);
        }
        curve.metadata.erase("points");
    }
    return curve;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    if (text.find(':') != std::string::npos) {
        double start = 0.0, step = 0.0, stop = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !(step > 0.0))
            throw std::invalid_argument("grid '" + text + "' must look like start:step:stop");
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= count; ++i) g.push_back(start + static_cast<double>(i) * step);
        return g;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        g.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("grid value '" + item + "' is not a number");
    }
    if (g.empty()) throw std::invalid_argument("empty Eb/N0 grid");
    return g;
}

ChannelRealization parse_taps(const std::string& text) {
    ComplexSequence taps;
    if (std::filesystem::is_regular_file(text)) {
        std::ifstream f(text);
        std::string line;
        while (std::getline(f, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double re = 0.0, im = 0.0;
            if (!(ls >> re)) continue;
            ls >> im;
            taps.emplace_back(re, im);
        }
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto colon = item.find(':');
            try {
                if (colon == std::string::npos)
                    taps.emplace_back(std::stod(item), 0.0);
                else
                    taps.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
            } catch (const std::logic_error&) {
                throw std::invalid_argument("cannot parse tap '" + item + "' (file not found either)");
            }
        }
    }
    return ChannelRealization(std::move(taps));
}

}  // namespace gpofdm
