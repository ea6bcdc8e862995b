#include "cavity_cs/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cavity_cs/csv.hpp"

namespace cavity_cs {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError("key '" + key + "' must be an integer");
    return j.at(key).get<std::int64_t>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError("key '" + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

TimeGrid parse_grid(const json& j) {
    reject_unknown(j, {"t0", "t_end", "steps", "substeps"}, "grid");
    TimeGrid g;
    try {
        g = TimeGrid(get_number(j, "t0", 0.0), get_number(j, "t_end", 1000.0),
                     static_cast<int>(get_integer(j, "steps", 1000)),
                     static_cast<int>(get_integer(j, "substeps", 32)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    return g;
}

NoiseSpec parse_noise(const json& j) {
    reject_unknown(j, {"enabled", "strength", "seed"}, "noise");
    NoiseSpec n;
    n.enabled = get_bool(j, "enabled", true);
    n.strength = get_number(j, "strength", 0.05);
    n.seed = static_cast<std::uint64_t>(get_integer(j, "seed", 0));
    if (n.strength < 0.0) throw ConfigError("noise.strength must be >= 0");
    return n;
}

DrivingProtocol parse_protocol(const json& j, const TimeGrid& grid,
                               const std::filesystem::path& base_dir) {
    const double default_period = (grid.t_end - grid.t0) / 5.0;
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "square") return SquarePulse{0.1, default_period, 0.2, 0.0};
        if (name == "random") return RandomSmooth(1, 5, 8, 0.1, grid.t0, grid.t_end);
        throw ConfigError("protocol '" + name + "' is not one of square|random");
    }
    if (!j.is_object()) throw ConfigError("protocol must be a string or an object");
    if (!j.contains("type")) throw ConfigError("protocol.type is required");
    const auto type = j.at("type").get<std::string>();
    if (type == "square") {
        reject_unknown(j, {"type", "amplitude", "period", "duty", "offset"}, "protocol");
        SquarePulse p;
        p.amplitude = get_number(j, "amplitude", 0.1);
        p.period = get_number(j, "period", default_period);
        p.duty = get_number(j, "duty", 0.2);
        p.offset = get_number(j, "offset", 0.0);
        if (!(p.period > 0.0)) throw ConfigError("protocol.period must be positive");
        if (!(p.duty > 0.0 && p.duty <= 1.0))
            throw ConfigError("protocol.duty must be in (0, 1]");
        return p;
    }
    if (type == "random") {
        reject_unknown(j, {"type", "seed", "harmonics", "max_harmonic", "rms"}, "protocol");
        try {
            return RandomSmooth(static_cast<std::uint64_t>(get_integer(j, "seed", 1)),
                                static_cast<int>(get_integer(j, "harmonics", 5)),
                                static_cast<int>(get_integer(j, "max_harmonic", 8)),
                                get_number(j, "rms", 0.1), grid.t0, grid.t_end);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("protocol: ") + e.what());
        }
    }
    if (type == "tabulated") {
        reject_unknown(j, {"type", "path", "t_start", "dt", "values"}, "protocol");
        Tabulated tab;
        if (j.contains("path")) {
            const auto rel = std::filesystem::path(j.at("path").get<std::string>());
            const auto full = rel.is_absolute() || base_dir.empty() ? rel : base_dir / rel;
            try {
                tab = io::load_tabulated(full);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("protocol.path: ") + e.what());
            }
        } else {
            tab.t_start = get_number(j, "t_start", 0.0);
            tab.dt = get_number(j, "dt", 1.0);
            if (!j.contains("values") || !j.at("values").is_array())
                throw ConfigError("protocol.values must be an array");
            for (const auto& v : j.at("values")) tab.values.push_back(v.get<double>());
            if (tab.values.size() < 2) throw ConfigError("protocol.values needs >= 2 samples");
            if (!(tab.dt > 0.0)) throw ConfigError("protocol.dt must be positive");
        }
        if (tab.t_start > grid.t0 || tab.t_last() < grid.t_end)
            throw ConfigError("protocol: tabulated samples must cover the grid window");
        return tab;
    }
    throw ConfigError("protocol.type '" + type + "' is not one of square|random|tabulated");
}

RecoverySettings parse_recovery(const json& j) {
    reject_unknown(j, {"max_support", "residual_tol", "normalize_columns"}, "recovery");
    RecoverySettings r;
    if (j.contains("max_support")) {
        const auto v = get_integer(j, "max_support", 0);
        if (v < 0) throw ConfigError("recovery.max_support must be >= 0");
        r.max_support = static_cast<int>(v);
    }
    if (j.contains("residual_tol")) {
        const double v = get_number(j, "residual_tol", 0.0);
        if (v < 0.0) throw ConfigError("recovery.residual_tol must be >= 0");
        r.residual_tol = v;
    }
    r.normalize_columns = get_bool(j, "normalize_columns", true);
    return r;
}

std::vector<int> parse_int_list(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty())
        throw ConfigError("sweep." + key + " must be a non-empty array of integers");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError("sweep." + key + " must hold integers");
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace

FullConfig parse_config_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j,
                   {"protocol", "delta", "grid", "noise", "M", "K", "recovery", "trials",
                    "seed", "success_threshold", "sweep"},
                   "config");
    FullConfig cfg;
    ExperimentConfig& e = cfg.experiment;
    e.grid = j.contains("grid") ? parse_grid(j.at("grid")) : TimeGrid{};
    e.protocol = j.contains("protocol")
                     ? parse_protocol(j.at("protocol"), e.grid, base_dir)
                     : DrivingProtocol(SquarePulse{0.1, (e.grid.t_end - e.grid.t0) / 5.0, 0.2, 0.0});
    e.detuning = get_number(j, "delta", 0.02);
    e.noise = j.contains("noise") ? parse_noise(j.at("noise")) : NoiseSpec{true, 0.05, 0};
    e.measurements = static_cast<int>(get_integer(j, "M", 220));
    e.flips = static_cast<int>(get_integer(j, "K", 30));
    if (j.contains("recovery")) e.recovery = parse_recovery(j.at("recovery"));
    e.trials = static_cast<int>(get_integer(j, "trials", 200));
    e.seed = static_cast<std::uint64_t>(get_integer(j, "seed", 1));
    e.success_threshold = get_number(j, "success_threshold", 2e-3);

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown(s, {"M", "K"}, "sweep");
        if (s.contains("M")) cfg.sweep_measurements = parse_int_list(s.at("M"), "M");
        if (s.contains("K")) cfg.sweep_flips = parse_int_list(s.at("K"), "K");
    }

    if (e.measurements < 1) throw ConfigError("M must be >= 1");
    if (e.flips < 0) throw ConfigError("K must be >= 0");
    if (e.flips > e.grid.steps - 1) throw ConfigError("K exceeds N-1");
    for (const int k : cfg.sweep_flips)
        if (k < 0 || k > e.grid.steps - 1) throw ConfigError("sweep.K entry exceeds N-1");
    for (const int m : cfg.sweep_measurements)
        if (m < 1) throw ConfigError("sweep.M entries must be >= 1");
    if (e.trials < 1) throw ConfigError("trials must be >= 1");
    if (!(e.success_threshold > 0.0)) throw ConfigError("success_threshold must be positive");
    return cfg;
}

FullConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_config_json(j, path.parent_path());
}

nlohmann::json config_to_json(const FullConfig& cfg) {
    const ExperimentConfig& e = cfg.experiment;
    json p;
    if (const auto* sq = std::get_if<SquarePulse>(&e.protocol)) {
        p = {{"type", "square"},
             {"amplitude", sq->amplitude},
             {"period", sq->period},
             {"duty", sq->duty},
             {"offset", sq->offset}};
    } else if (const auto* rs = std::get_if<RandomSmooth>(&e.protocol)) {
        p = {{"type", "random"},
             {"seed", rs->seed()},
             {"harmonics", rs->harmonics()},
             {"max_harmonic", rs->max_harmonic()},
             {"rms", rs->rms()}};
    } else {
        const auto& tab = std::get<Tabulated>(e.protocol);
        p = {{"type", "tabulated"},
             {"t_start", tab.t_start},
             {"dt", tab.dt},
             {"values", tab.values}};
    }
    json r = json::object();
    if (e.recovery.max_support) r["max_support"] = *e.recovery.max_support;
    if (e.recovery.residual_tol) r["residual_tol"] = *e.recovery.residual_tol;
    r["normalize_columns"] = e.recovery.normalize_columns;
    return json{{"protocol", p},
                {"delta", e.detuning},
                {"grid",
                 {{"t0", e.grid.t0},
                  {"t_end", e.grid.t_end},
                  {"steps", e.grid.steps},
                  {"substeps", e.grid.substeps}}},
                {"noise",
                 {{"enabled", e.noise.enabled},
                  {"strength", e.noise.strength},
                  {"seed", e.noise.seed}}},
                {"M", e.measurements},
                {"K", e.flips},
                {"recovery", r},
                {"trials", e.trials},
                {"seed", e.seed},
                {"success_threshold", e.success_threshold},
                {"sweep", {{"M", cfg.sweep_measurements}, {"K", cfg.sweep_flips}}}};
}

}  // namespace cavity_cs
