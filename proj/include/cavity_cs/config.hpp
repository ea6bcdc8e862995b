#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cavity_cs/experiments.hpp"

namespace cavity_cs {

// configuration problems map to their own CLI exit code
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FullConfig {
    ExperimentConfig experiment;
    std::vector<int> sweep_measurements{100, 140, 180, 220, 260};
    std::vector<int> sweep_flips{2, 5, 10, 20, 50, 100};
};

// Strict parse: unknown keys are rejected, violations name the offending
// key, defaults fill everything an empty object omits.
FullConfig parse_config(const std::filesystem::path& path);
FullConfig parse_config_json(const nlohmann::json& j,
                             const std::filesystem::path& base_dir = {});

// resolved configuration as JSON (the manifest payload)
nlohmann::json config_to_json(const FullConfig& cfg);

}  // namespace cavity_cs
