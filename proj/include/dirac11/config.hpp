#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace d11 {

struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(const std::string& k, const std::string& what) : std::runtime_error(k + ": " + what), key(k) {}
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string model = "free";

    double L = 6.283185307179586;
    int N = 256;

    double T = 1.0;
    int output_every = 1;

    double lambda = 0.0;
    double kappa = 0.0;
    std::string connection = "flat";
    double connection_amplitude = 0.5;
    int connection_mode = 1;
    std::string target = "sphere";
    int q = 3;
    std::string integrator = "split";
    int rank = 1;
    double audit_factor = 1.0;

    std::string preset = "random";
    std::uint64_t seed = 1;
    double amplitude = 1.0;
    int max_mode = 4;
    int mode = 1;
    int branch = 1;
    double a = 1.0;
    double b = 1.0;
    double perturbation = 0.0;
    double spinor_amplitude = 1.0;

    std::vector<std::string> monitors;
    bool refinement = false;

    std::string output_dir;

    // Number of steps of size dt = L / N closest to T.
    int steps() const;
};

// Flat "section.key" -> raw value map of an INI text; rejects malformed lines and duplicates.
std::map<std::string, std::string> parse_ini(const std::string& text);

// Strict: unknown sections or keys, unparsable values and invalid combinations throw ConfigError
// naming the key. `overrides` are "section.key=value" strings applied after the text.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Accepted keys, "section.key".
const std::vector<std::string>& config_keys();

} // namespace d11
