#include "boltzgrad/experiments/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>

#include "boltzgrad/error.hpp"

namespace boltzgrad::experiments {

using nlohmann::json;

namespace {

struct ScenarioInfo {
  std::string description;
  json physics;
  json numerics;
  bool particles = false;  ///< subject to the N eps^{d-1} warning
};

const std::map<std::string, ScenarioInfo>& registry() {
  static const std::map<std::string, ScenarioInfo> r = {
      {"lanford",
       {"factorized ensembles over an eps sweep versus the Boltzmann solve from the same f0",
        {{"dim", 2}, {"N_list", {64, 128, 256}}, {"N_eps", 1.0}, {"beta", 1.0},
         {"density", "two_bump"}, {"shift", 1.0}, {"t", 0.01}, {"lambda_margin", 1.0}},
        {{"replicas", 1000}, {"velocity_bins", 8}, {"grid_nodes", 32},
         {"v_cut", 4.0}, {"dt", 0.0025}, {"angles", 32}},
        true}},
      {"loschmidt",
       {"forward to tau, velocity reversal, forward to 2 tau; particle versus Boltzmann entropy",
        {{"dim", 2}, {"N", 64}, {"eps", 0.015625}, {"beta", 1.0}, {"density", "two_bump"},
         {"shift", 1.0}, {"tau", 0.0}, {"lambda_margin", 1.0}},
        {{"replicas", 4000}, {"groups", 8}, {"grid_nodes", 32}, {"v_cut", 5.0}, {"steps", 2},
         {"angles", 32}, {"mix", 0.01}},
        true}},
      {"concatenation",
       {"Boltzmann restarted from the particle marginal at tau versus the direct solve at tau'",
        {{"dim", 2}, {"N", 128}, {"N_eps", 1.0}, {"beta", 1.0}, {"density", "two_bump"},
         {"shift", 1.0}, {"tau", 0.005}, {"tau_prime", 0.01}},
        {{"replicas", 2000}, {"grid_nodes", 32}, {"v_cut", 4.0}, {"dt", 0.0025}, {"angles", 32},
         {"mix", 0.01}, {"compare_bins", 8}},
        true}},
      {"badset-scaling",
       {"bad-set measure sweeps: nesting, scaling slope, intersection, reversal duality",
        {{"dim", 2}, {"n", 2}, {"R", 2.0}, {"T", 0.5}, {"eps0_list", {0.04, 0.02, 0.01, 0.005}},
         {"eps0_intersection", 0.01}},
        {{"samples", 100000}, {"nesting_samples", 10000}, {"slope_tolerance", 0.15},
         {"intersection_factor", 10.0}},
        false}},
      {"chaos",
       {"chaos defect versus N for factorized data at t = 0 and t = tau",
        {{"dim", 2}, {"N_list", {64, 128, 256}}, {"N_eps", 1.0}, {"beta", 1.0},
         {"density", "two_bump"}, {"shift", 1.0}, {"tau", 0.005}},
        {{"replicas", 2000}, {"position_bins", 2}, {"velocity_bins", 2}, {"velocity_R", 2.0},
         {"sigma_tolerance", 2.0}},
        true}},
      {"counterexample",
       {"conditioned grand-canonical data: free transport, Boltzmann departure, chaos off the bad set",
        {{"dim", 2}, {"eps", 0.02}, {"delta", 0.05}, {"beta", 1.0}, {"density", "two_bump"},
         {"shift", 1.0}},
        {{"replicas", 10000}, {"grid_nodes", 32}, {"v_cut", 4.0}, {"dt", 0.0125}, {"angles", 32},
         {"mix", 0.01}, {"compare_bins", 8}, {"probe_position_bins", 8},
         {"probe_velocity_bins", 2}, {"probe_velocity_R", 2.0}, {"max_pairs", 400}},
        false}},
      {"tree-vs-solver",
       {"Duhamel partial sums from collision trees versus the homogeneous solver",
        {{"dim", 2}, {"beta", 1.0}, {"shift", 1.0}, {"n", 1}, {"s_max", 3}, {"x", {0.5, 0.5}},
         {"v", {0.9375, 0.0}}, {"t_fraction", 0.1}, {"lambda_margin", 1.0},
         {"slope_times", {0.01, 0.02, 0.04}}},
        {{"samples", 100000}, {"slope_samples", 400000}, {"proposal_beta", 0.5}, {"grid_nodes", 32}, {"v_cut", 5.0},
         {"angles", 32}, {"solver_steps", 4}, {"relative_tolerance", 0.02},
         {"slope_tolerance", 0.3}},
        false}},
      {"htheorem",
       {"entropy and entropy-production traces for forward and reverse homogeneous solves",
        {{"dim", 2}, {"beta", 1.0}, {"shift", 1.0}, {"t_final", 1.0}, {"reverse_t", 0.0},
         {"lambda_margin", 1.0}},
        {{"grid_nodes", 32}, {"v_cut", 5.0}, {"dt", 0.025}, {"angles", 32},
         {"d_samples", 1000000}, {"d_samples_trace", 200000}, {"output_every", 4},
         {"entropy_slack", 1e-6}},
        false}},
  };
  return r;
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

json merge_section(const std::string& section, const json& defaults, const json& given) {
  json out = defaults;
  if (given.is_null()) return out;
  if (!given.is_object()) invalid(fmt::format("'{}' must be an object", section));
  for (const auto& [key, value] : given.items()) {
    if (!defaults.contains(key)) invalid(fmt::format("unknown key '{}.{}'", section, key));
    if (!same_kind(defaults[key], value))
      invalid(fmt::format("'{}.{}' has the wrong type", section, key));
    if (value.is_array())
      for (const auto& e : value)
        if (!e.is_number()) invalid(fmt::format("'{}.{}' must hold numbers", section, key));
    out[key] = value;
  }
  return out;
}

const json& lookup(const ExperimentConfig& c, const std::string& key) {
  if (c.physics.contains(key)) return c.physics[key];
  if (c.numerics.contains(key)) return c.numerics[key];
  throw Error(ErrorCode::ConfigInvalid, fmt::format("missing key '{}'", key));
}

}  // namespace

double ExperimentConfig::num(const std::string& key) const { return lookup(*this, key).get<double>(); }

std::size_t ExperimentConfig::count(const std::string& key) const {
  double v = num(key);
  if (v < 0 || v != std::floor(v)) invalid(fmt::format("'{}' must be a nonnegative integer", key));
  return static_cast<std::size_t>(v);
}

std::string ExperimentConfig::str(const std::string& key) const {
  return lookup(*this, key).get<std::string>();
}

std::vector<double> ExperimentConfig::list(const std::string& key) const {
  return lookup(*this, key).get<std::vector<double>>();
}

json ExperimentConfig::to_json() const {
  return {{"schema_version", kSchemaVersion}, {"scenario", scenario}, {"seed", seed},
          {"output_dir", output_dir},         {"physics", physics},   {"numerics", numerics}};
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, info] : registry()) out.push_back(name);
  return out;
}

std::string scenario_description(const std::string& name) {
  auto it = registry().find(name);
  return it == registry().end() ? "" : it->second.description;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "schema_version" && key != "scenario" && key != "seed" && key != "output_dir" &&
        key != "physics" && key != "numerics")
      invalid(fmt::format("unknown top-level key '{}'", key));
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    invalid(fmt::format("schema_version must be {}", kSchemaVersion));
  if (!j.contains("scenario") || !j["scenario"].is_string()) invalid("missing 'scenario'");
  if (!j.contains("seed") || !j["seed"].is_number_integer() ||
      (!j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0))
    invalid("'seed' must be a nonnegative integer");
  ExperimentConfig c;
  c.scenario = j["scenario"].get<std::string>();
  auto it = registry().find(c.scenario);
  if (it == registry().end()) invalid(fmt::format("unknown scenario '{}'", c.scenario));
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) invalid("'output_dir' must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  c.physics = merge_section("physics", it->second.physics, j.value("physics", json()));
  c.numerics = merge_section("numerics", it->second.numerics, j.value("numerics", json()));

  const double dim = c.num("dim");
  if (dim != 2 && dim != 3) invalid("dim must be 2 or 3");
  if (c.physics.contains("density")) {
    auto d = c.str("density");
    if (d != "maxwellian" && d != "two_bump") invalid("density must be 'maxwellian' or 'two_bump'");
  }
  for (const char* key : {"beta", "eps", "delta", "R", "T", "tau_prime", "t", "t_final",
                          "lambda_margin", "v_cut", "dt", "t_fraction", "N_eps", "velocity_R"})
    if (c.physics.contains(key) || c.numerics.contains(key))
      if (!(c.num(key) > 0)) invalid(fmt::format("'{}' must be positive", key));
  for (const char* key : {"replicas", "samples", "grid_nodes", "angles", "N", "n", "groups"})
    if ((c.physics.contains(key) || c.numerics.contains(key)) && c.count(key) == 0)
      invalid(fmt::format("'{}' must be a positive integer", key));
  if (c.physics.contains("x") && c.list("x").size() != static_cast<std::size_t>(dim))
    invalid("'x' must have dim entries");
  if (c.physics.contains("v") && c.list("v").size() != static_cast<std::size_t>(dim))
    invalid("'v' must have dim entries");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid(fmt::format("cannot open '{}'", path));
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    invalid(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
  return parse_config(j);
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) {
  std::vector<std::string> out;
  const auto& info = registry().at(c.scenario);
  const double d = c.num("dim");
  if (d == 3) out.push_back("d = 3 is supported but slow at these settings");
  if (!info.particles) return out;
  double scale = 1.0;
  if (c.physics.contains("eps") && c.physics.contains("N"))
    scale = c.num("N") * std::pow(c.num("eps"), d - 1);
  else if (c.physics.contains("N_eps"))
    scale = c.num("N_eps");  // eps is derived from N so that N eps^{d-1} = N_eps
  if (scale < 0.5 || scale > 2.0)
    out.push_back(fmt::format("N eps^(d-1) = {:.4g} lies outside [0.5, 2]", scale));
  return out;
}

}  // namespace boltzgrad::experiments
