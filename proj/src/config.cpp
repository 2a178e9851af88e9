#include "kdv5/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kdv5/errors.hpp"

namespace kdv5 {

using nlohmann::json;

namespace {

// best-effort source line of a key, for the diagnostics
int key_line(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const size_t pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

[[noreturn]] void fail(const std::string& raw, const std::string& path, const std::string& msg) {
    const std::string leaf = path.substr(path.find_last_of('.') + 1);
    const int line = key_line(raw, leaf);
    std::ostringstream os;
    os << "config: " << path;
    if (line > 0) os << " (line " << line << ")";
    os << ": " << msg;
    throw ConfigError(os.str());
}

void check_keys(const std::string& raw, const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            const int line = key_line(raw, key);
            std::ostringstream os;
            os << "config: unknown key \"" << (path.empty() ? key : path + "." + key) << "\"";
            if (line > 0) os << " (line " << line << ")";
            throw ConfigError(os.str());
        }
    }
}

template <typename T>
T get_or(const std::string& raw, const json& j, const std::string& path, const std::string& key,
         T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(raw, path + "." + key, "wrong type");
    }
}

ScenarioConfig::DataCfg parse_data(const std::string& raw, const json& j,
                                   const std::string& path) {
    ScenarioConfig::DataCfg d;
    d.present = true;
    check_keys(raw, j, path, {"name", "k", "amplitude", "modes"});
    d.name = get_or<std::string>(raw, j, path, "name", "");
    d.k = get_or<int>(raw, j, path, "k", 1);
    d.amplitude = get_or<double>(raw, j, path, "amplitude", 1e-3);
    if (j.contains("modes")) {
        for (const auto& row : j.at("modes")) {
            if (!row.is_array() || row.size() != 3)
                fail(raw, path + ".modes", "each entry must be [k, re, im]");
            d.modes.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
    }
    if (d.name.empty() && d.modes.empty())
        fail(raw, path, "either a named field or a modes list is required");
    static const std::set<std::string> names = {"", "sine", "cosine", "two_mode", "random"};
    if (!names.count(d.name)) fail(raw, path + ".name", "unknown field name \"" + d.name + "\"");
    return d;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: " + origin + ": document must be an object");

    ScenarioConfig cfg;
    cfg.raw = text;
    const std::string& raw = text;
    check_keys(raw, j, "",
               {"grid", "model", "profile", "run", "initial_data", "target_data", "output",
                "threads"});

    if (!j.contains("grid")) throw ConfigError("config: missing section \"grid\"");
    {
        const json& g = j.at("grid");
        check_keys(raw, g, "grid", {"K", "n_points"});
        cfg.grid.K = get_or<int>(raw, g, "grid", "K", 16);
        cfg.grid.n_points = get_or<int>(raw, g, "grid", "n_points", 0);
        if (cfg.grid.K < 1) fail(raw, "grid.K", "must be a positive integer");
        if (cfg.grid.n_points != 0 && cfg.grid.n_points < 2 * cfg.grid.K + 1)
            fail(raw, "grid.n_points", "must be >= 2K+1 = " + std::to_string(2 * cfg.grid.K + 1));
    }
    if (j.contains("model")) {
        const json& m = j.at("model");
        check_keys(raw, m, "model",
                   {"epsilon", "beta0", "beta1", "l", "coefficients", "hierarchy", "feedback"});
        cfg.model.eps = get_or<double>(raw, m, "model", "epsilon", 0.0);
        cfg.model.beta0 = get_or<double>(raw, m, "model", "beta0", 0.0);
        cfg.model.beta1 = get_or<double>(raw, m, "model", "beta1", 0.0);
        cfg.model.l = get_or<int>(raw, m, "model", "l", 2);
        cfg.model.hierarchy = get_or<bool>(raw, m, "model", "hierarchy", false);
        cfg.model.feedback = get_or<bool>(raw, m, "model", "feedback", false);
        if (cfg.model.eps < 0.0) fail(raw, "model.epsilon", "must be nonnegative");
        if (cfg.model.l < 2) fail(raw, "model.l", "must be >= 2");
        if (m.contains("coefficients")) {
            const json& c = m.at("coefficients");
            if (!c.is_array() || c.size() != 4)
                fail(raw, "model.coefficients", "must be [c0, c1, c2, c3]");
            cfg.model.c0 = c[0].get<double>();
            cfg.model.c1 = c[1].get<double>();
            cfg.model.c2 = c[2].get<double>();
            cfg.model.c3 = c[3].get<double>();
            if (cfg.model.hierarchy &&
                (cfg.model.c0 != 0 || cfg.model.c1 != 0 || cfg.model.c2 != 0 || cfg.model.c3 != 0))
                fail(raw, "model.hierarchy", "hierarchy term excludes nonzero coefficients");
        }
    }
    if (j.contains("profile")) {
        const json& p = j.at("profile");
        check_keys(raw, p, "profile", {"uniform", "center", "radius"});
        cfg.profile.uniform = get_or<bool>(raw, p, "profile", "uniform", false);
        cfg.profile.center = get_or<double>(raw, p, "profile", "center", cfg.profile.center);
        cfg.profile.radius = get_or<double>(raw, p, "profile", "radius", cfg.profile.radius);
        if (!cfg.profile.uniform) {
            if (!(cfg.profile.radius > 0.0 && cfg.profile.radius < M_PI))
                fail(raw, "profile.radius",
                     "must lie in (0, pi), got " + std::to_string(cfg.profile.radius));
            if (cfg.profile.center < 0.0 || cfg.profile.center >= 2.0 * M_PI)
                fail(raw, "profile.center", "must lie in [0, 2pi)");
        }
    }
    if (!j.contains("run")) throw ConfigError("config: missing section \"run\"");
    {
        const json& r = j.at("run");
        check_keys(raw, r, "run", {"command", "T", "dt", "s", "tol", "seed", "linear"});
        cfg.run.command = get_or<std::string>(raw, r, "run", "command", "");
        cfg.run.T = get_or<double>(raw, r, "run", "T", 1.0);
        cfg.run.dt = get_or<double>(raw, r, "run", "dt", 1e-3);
        cfg.run.s = get_or<double>(raw, r, "run", "s", 2.5);
        cfg.run.tol = get_or<double>(raw, r, "run", "tol", 1e-8);
        cfg.run.seed = get_or<unsigned long long>(raw, r, "run", "seed", 0);
        cfg.run.linear = get_or<bool>(raw, r, "run", "linear", false);
        static const std::set<std::string> cmds = {"simulate", "stabilize", "control",
                                                   "observability", "verify"};
        if (!cmds.count(cfg.run.command))
            fail(raw, "run.command",
                 "must be one of simulate|stabilize|control|observability|verify");
        if (cfg.run.T <= 0.0) fail(raw, "run.T", "must be positive");
        if (cfg.run.dt <= 0.0) fail(raw, "run.dt", "must be positive");
        const double steps = cfg.run.T / cfg.run.dt;
        if (std::abs(steps - std::llround(steps)) > 1e-8 * std::max(1.0, steps))
            fail(raw, "run.dt", "must divide T");
        if (cfg.run.tol <= 0.0) fail(raw, "run.tol", "must be positive");
    }
    if (j.contains("initial_data"))
        cfg.initial_data = parse_data(raw, j.at("initial_data"), "initial_data");
    if (j.contains("target_data"))
        cfg.target_data = parse_data(raw, j.at("target_data"), "target_data");
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(raw, o, "output",
                   {"directory", "formats", "norms_s", "stride", "trajectory_kind"});
        cfg.output.directory = get_or<std::string>(raw, o, "output", "directory", "out");
        if (o.contains("formats")) {
            cfg.output.formats.clear();
            for (const auto& f : o.at("formats")) {
                const std::string s = f.get<std::string>();
                if (s != "csv" && s != "json") fail(raw, "output.formats", "entries must be csv|json");
                cfg.output.formats.push_back(s);
            }
        }
        if (o.contains("norms_s")) {
            cfg.output.norms_s.clear();
            for (const auto& v : o.at("norms_s")) cfg.output.norms_s.push_back(v.get<double>());
        }
        cfg.output.stride = get_or<int>(raw, o, "output", "stride", 1);
        if (cfg.output.stride < 1) fail(raw, "output.stride", "must be >= 1");
        cfg.output.trajectory_kind =
            get_or<std::string>(raw, o, "output", "trajectory_kind", "physical");
        if (cfg.output.trajectory_kind != "physical" && cfg.output.trajectory_kind != "modes")
            fail(raw, "output.trajectory_kind", "must be physical|modes");
    }
    cfg.threads = get_or<int>(raw, j, "", "threads", 1);
    if (cfg.threads < 1) fail(raw, "threads", "must be >= 1");

    // cross-field checks
    if (cfg.run.command == "simulate" || cfg.run.command == "stabilize") {
        if (!cfg.initial_data.present)
            throw ConfigError("config: " + cfg.run.command + " requires initial_data");
    }
    if (cfg.run.command == "control" && !cfg.target_data.present)
        throw ConfigError("config: control requires target_data");
    if (cfg.run.command == "stabilize" && !cfg.model.feedback)
        fail(raw, "model.feedback", "stabilize requires the feedback term (set true)");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string config_hash(const ScenarioConfig& cfg) {
    unsigned long long h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : cfg.raw) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return std::string(buf);
}

}  // namespace kdv5
