#include "dirac11/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dirac11/monitors.hpp"

namespace d11 {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    return out;
}

template <class I>
I to_int(const std::string& key, const std::string& v)
{
    I out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed)
{
    std::string list;
    for (const char* a : allowed) {
        if (v == a)
            return;
        list += list.empty() ? a : std::string(", ") + a;
    }
    throw ConfigError(key, "'" + v + "' is not one of " + list);
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

const std::map<std::string, std::vector<std::string>>& presets_by_model()
{
    static const std::map<std::string, std::vector<std::string>> m = {
        {"free", {"random", "plane_wave"}},
        {"massive", {"random", "plane_wave"}},
        {"twisted", {"random"}},
        {"thirring", {"random"}},
        {"dirac_wave_map", {"geodesic", "uncoupled", "random", "free_spinor"}},
    };
    return m;
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "scenario.name",       "scenario.model",        "grid.L",
        "grid.N",              "time.T",                "time.output_every",
        "params.lambda",       "params.kappa",          "params.connection",
        "params.connection_amplitude", "params.connection_mode", "params.target",
        "params.q",            "params.integrator",     "params.rank",
        "params.audit_factor", "initial.preset",        "initial.seed",
        "initial.amplitude",   "initial.max_mode",      "initial.mode",
        "initial.branch",      "initial.a",             "initial.b",
        "initial.perturbation", "initial.spinor_amplitude", "monitors.names",
        "monitors.refinement", "output.dir",
    };
    return keys;
}

int ScenarioConfig::steps() const
{
    return (int)std::llround(T / (L / N));
}

std::map<std::string, std::string> parse_ini(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno), "key outside of a section");
        std::string key = section + "." + trim(line.substr(0, eq));
        if (out.count(key))
            throw ConfigError(key, "duplicate key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides)
{
    auto kv = parse_ini(text);
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos)
            throw ConfigError(o, "override must look like section.key=value");
        kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
    }
    const auto& keys = config_keys();
    for (const auto& [k, v] : kv)
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ConfigError(k, "unknown key");

    ScenarioConfig c;
    auto get = [&](const char* k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto num = [&](const char* k, double& dst) {
        if (auto v = get(k))
            dst = to_double(k, *v);
    };
    auto integer = [&](const char* k, int& dst) {
        if (auto v = get(k))
            dst = to_int<int>(k, *v);
    };
    auto str = [&](const char* k, std::string& dst) {
        if (auto v = get(k))
            dst = *v;
    };

    str("scenario.name", c.name);
    str("scenario.model", c.model);
    num("grid.L", c.L);
    integer("grid.N", c.N);
    num("time.T", c.T);
    integer("time.output_every", c.output_every);
    num("params.lambda", c.lambda);
    num("params.kappa", c.kappa);
    str("params.connection", c.connection);
    num("params.connection_amplitude", c.connection_amplitude);
    integer("params.connection_mode", c.connection_mode);
    str("params.target", c.target);
    integer("params.q", c.q);
    str("params.integrator", c.integrator);
    integer("params.rank", c.rank);
    num("params.audit_factor", c.audit_factor);
    str("initial.preset", c.preset);
    if (auto v = get("initial.seed"))
        c.seed = to_int<std::uint64_t>("initial.seed", *v);
    num("initial.amplitude", c.amplitude);
    integer("initial.max_mode", c.max_mode);
    integer("initial.mode", c.mode);
    integer("initial.branch", c.branch);
    num("initial.a", c.a);
    num("initial.b", c.b);
    num("initial.perturbation", c.perturbation);
    num("initial.spinor_amplitude", c.spinor_amplitude);
    if (auto v = get("monitors.refinement"))
        c.refinement = to_bool("monitors.refinement", *v);
    str("output.dir", c.output_dir);

    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("scenario.name", "must be a non-empty plain name");
    one_of("scenario.model", c.model, {"free", "massive", "twisted", "thirring", "dirac_wave_map"});
    if (!(c.L > 0.0))
        throw ConfigError("grid.L", "must be positive");
    if (c.N < 8 || c.N % 2 != 0)
        throw ConfigError("grid.N", "must be even and at least 8");
    if (!(c.T > 0.0))
        throw ConfigError("time.T", "must be positive");
    if (c.steps() < 1)
        throw ConfigError("time.T", "shorter than one step dt = L / N");
    if (c.output_every < 1)
        throw ConfigError("time.output_every", "must be at least 1");
    one_of("params.connection", c.connection, {"flat", "abelian_curved", "nonabelian"});
    one_of("params.target", c.target, {"sphere", "flat_torus"});
    one_of("params.integrator", c.integrator, {"split", "midpoint"});
    if (c.q < 2 || c.q > kMaxAmbient)
        throw ConfigError("params.q", "must be in [2, 8]");
    if (c.rank < 1 || c.rank > 8)
        throw ConfigError("params.rank", "must be in [1, 8]");
    if (c.connection == "nonabelian" && c.rank != 2)
        throw ConfigError("params.rank", "the nonabelian connection has rank 2");
    if (c.connection == "abelian_curved" && c.rank != 1)
        throw ConfigError("params.rank", "the abelian connection has rank 1");
    if (c.connection_mode < 0)
        throw ConfigError("params.connection_mode", "must be non-negative");
    if (!(c.audit_factor > 0.0))
        throw ConfigError("params.audit_factor", "must be positive");
    if (c.model == "dirac_wave_map" && c.preset == "uncoupled" && c.q != 3)
        throw ConfigError("params.q", "the uncoupled solution lives on S^2, q = 3");
    if (c.model == "dirac_wave_map" && (c.preset == "geodesic" || c.preset == "uncoupled") && c.target != "sphere")
        throw ConfigError("params.target", "preset " + c.preset + " needs the sphere");

    const auto& allowed = presets_by_model().at(c.model);
    if (std::find(allowed.begin(), allowed.end(), c.preset) == allowed.end())
        throw ConfigError("initial.preset", "'" + c.preset + "' is not an initial preset of model " + c.model);
    if (c.max_mode < 0 || c.max_mode > c.N / 8)
        throw ConfigError("initial.max_mode", "must be in [0, N/8]");
    if (c.branch != 1 && c.branch != -1)
        throw ConfigError("initial.branch", "must be 1 or -1");
    if (c.preset == "plane_wave" && c.mode == 0 && c.lambda == 0.0)
        throw ConfigError("initial.mode", "mode 0 with lambda 0 has no plane wave");
    if (!(c.perturbation >= 0.0))
        throw ConfigError("initial.perturbation", "must be non-negative");

    std::string names = "all";
    str("monitors.names", names);
    std::vector<std::string> list = split_list(names);
    if (list.size() == 1 && list[0] == "all")
        list = monitors_for(c.model);
    for (const auto& n : list) {
        const MonitorInfo* m = find_monitor(n);
        if (!m)
            throw ConfigError("monitors.names", "unknown monitor '" + n + "'");
        if (!m->applies_to(c.model))
            throw ConfigError("monitors.names", "monitor '" + n + "' does not apply to model " + c.model);
        if (n == "gronwall_envelope" && c.perturbation == 0.0)
            throw ConfigError("initial.perturbation", "gronwall_envelope needs a positive perturbation");
    }
    if (list.empty())
        throw ConfigError("monitors.names", "no monitors selected");
    c.monitors = list;
    return c;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot read config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

} // namespace d11
