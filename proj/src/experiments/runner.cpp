#include "boltzgrad/experiments/runner.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <ctime>
#include <functional>
#include <map>

#include "boltzgrad/error.hpp"
#include "boltzgrad/parallel.hpp"

namespace boltzgrad::experiments {

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

RunResult run_experiment(ExperimentConfig config, const RunOverrides& overrides) {
  static const std::map<std::string, std::function<void(const ExperimentConfig&, RunOutput&)>>
      scenarios = {
          {"lanford", run_lanford},
          {"loschmidt", run_loschmidt},
          {"concatenation", run_concatenation},
          {"badset-scaling", run_badset_scaling},
          {"chaos", run_chaos},
          {"counterexample", run_counterexample},
          {"tree-vs-solver", run_tree_vs_solver},
          {"htheorem", run_htheorem},
      };
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.threads) set_default_threads(*overrides.threads);

  RunResult res;
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  RunOutput out(config.output_dir);
  for (const auto& w : config_warnings(config)) out.warn(w);
  try {
    scenarios.at(config.scenario)(config, out);
  } catch (const Error& e) {
    res.error = e.what();
    res.exit_code = e.code() == ErrorCode::ConfigInvalid ? kExitConfig : kExitPathology;
    spdlog::error("{}", e.what());
    out.note("error", e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.finish(config, elapsed, started);
  res.summary = out.summary(config);
  res.manifest = out.manifest(config, elapsed, started);
  if (res.exit_code == kExitOk && !out.all_passed()) res.exit_code = kExitAssertion;
  return res;
}

}  // namespace boltzgrad::experiments
