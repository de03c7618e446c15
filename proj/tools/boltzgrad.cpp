#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "boltzgrad/error.hpp"
#include "boltzgrad/experiments/config.hpp"
#include "boltzgrad/experiments/runner.hpp"

using namespace boltzgrad;
using namespace boltzgrad::experiments;

int main(int argc, char** argv) {
  CLI::App app{"boltzgrad: hard-sphere and Boltzmann experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  auto* thr_opt = run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("--config", validate_path, "experiment config (JSON)")->required();

  auto* list = app.add_subcommand("list-scenarios", "print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*list) {
    for (const auto& name : scenario_names())
      fmt::print("{:<16} {}\n", name, scenario_description(name));
    return kExitOk;
  }

  if (*validate) {
    try {
      auto c = load_config(validate_path);
      for (const auto& w : config_warnings(c)) fmt::print(stderr, "warning: {}\n", w);
      std::cout << c.to_json().dump(2) << "\n";
      return kExitOk;
    } catch (const Error& e) {
      fmt::print(stderr, "{}\n", e.what());
      return kExitConfig;
    }
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kExitConfig;
  }
  RunOverrides ov;
  if (*out_opt) ov.output_dir = out_dir;
  if (*seed_opt) ov.seed = seed;
  if (*thr_opt) ov.threads = threads;
  auto res = run_experiment(config, ov);
  if (!res.error.empty()) fmt::print(stderr, "error: {}\n", res.error);
  return res.exit_code;
}
