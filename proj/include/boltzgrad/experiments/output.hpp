#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "boltzgrad/experiments/config.hpp"

namespace boltzgrad::experiments {

struct Assertion {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

std::string sha256_hex(const std::string& bytes);

/// Single writer for one run directory: data files, summary.json, manifest.json.
class RunOutput {
 public:
  explicit RunOutput(std::string dir);

  const std::string& dir() const { return dir_; }
  /// Writes `content` to dir/name and records its checksum.
  void write(const std::string& name, const std::string& content);
  void assert_that(const std::string& name, bool pass, nlohmann::json detail = {});
  void note(const std::string& key, nlohmann::json value);
  void warn(const std::string& message);

  bool all_passed() const;
  const std::vector<Assertion>& assertions() const { return assertions_; }

  nlohmann::json summary(const ExperimentConfig& config) const;
  nlohmann::json manifest(const ExperimentConfig& config, double elapsed_seconds,
                          const std::string& started_utc) const;
  void finish(const ExperimentConfig& config, double elapsed_seconds,
              const std::string& started_utc);

 private:
  std::string dir_;
  nlohmann::json files_ = nlohmann::json::array();
  nlohmann::json notes_ = nlohmann::json::object();
  std::vector<std::string> warnings_;
  std::vector<Assertion> assertions_;
};

}  // namespace boltzgrad::experiments
