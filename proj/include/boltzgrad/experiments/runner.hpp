#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "boltzgrad/experiments/config.hpp"
#include "boltzgrad/experiments/output.hpp"

namespace boltzgrad::experiments {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitPathology = 3,
  kExitAssertion = 4,
};

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
  nlohmann::json manifest;
  std::string error;
};

/// Runs one scenario end to end. Module errors map to exit code 3 (2 for
/// ConfigInvalid); failed scenario assertions to 4.
RunResult run_experiment(ExperimentConfig config, const RunOverrides& overrides = {});

/// Scenario entry points; each writes its files and assertions into `out`.
void run_lanford(const ExperimentConfig& c, RunOutput& out);
void run_loschmidt(const ExperimentConfig& c, RunOutput& out);
void run_concatenation(const ExperimentConfig& c, RunOutput& out);
void run_badset_scaling(const ExperimentConfig& c, RunOutput& out);
void run_chaos(const ExperimentConfig& c, RunOutput& out);
void run_counterexample(const ExperimentConfig& c, RunOutput& out);
void run_tree_vs_solver(const ExperimentConfig& c, RunOutput& out);
void run_htheorem(const ExperimentConfig& c, RunOutput& out);

}  // namespace boltzgrad::experiments
