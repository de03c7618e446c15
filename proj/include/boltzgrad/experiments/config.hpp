#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace boltzgrad::experiments {

inline constexpr int kSchemaVersion = 1;

/// Validated configuration with scenario defaults filled in.
struct ExperimentConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  nlohmann::json physics;
  nlohmann::json numerics;

  double num(const std::string& key) const;  ///< physics first, then numerics
  std::size_t count(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  /// Canonical JSON (sorted keys, defaults included) used for hashing.
  nlohmann::json to_json() const;
};

std::vector<std::string> scenario_names();
std::string scenario_description(const std::string& name);

/// Throws Error(ConfigInvalid) on unknown scenario, unknown or mistyped keys,
/// or out-of-range values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Non-fatal remarks, e.g. N eps^{d-1} outside [0.5, 2].
std::vector<std::string> config_warnings(const ExperimentConfig& c);

}  // namespace boltzgrad::experiments
