// One line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance <scratch-dir>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "boltzgrad/badsets.hpp"
#include "boltzgrad/collision_operator.hpp"
#include "boltzgrad/density.hpp"
#include "boltzgrad/dsmc.hpp"
#include "boltzgrad/experiments/config.hpp"
#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/initial_data.hpp"
#include "boltzgrad/trees.hpp"

using namespace boltzgrad;
using namespace boltzgrad::experiments;
namespace fs = std::filesystem;

namespace {

fs::path g_root;
int g_failed = 0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void criterion(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs <= budget_seconds;
  bool pass = o.pass && in_time;
  g_failed += !pass;
  fmt::print("{} {} ({:.1f} s of {:.0f} s{}) {}\n", pass ? "PASS" : "FAIL", name, secs,
             budget_seconds, in_time ? "" : ", over budget", o.detail);
  std::fflush(stdout);
}

RunResult run_scenario(const std::string& name, const std::string& tag) {
  auto c = parse_config({{"schema_version", kSchemaVersion}, {"scenario", name}, {"seed", 7}});
  RunOverrides o;
  o.output_dir = (g_root / tag).string();
  fs::remove_all(*o.output_dir);
  return run_experiment(c, o);
}

Outcome scenario_outcome(const RunResult& r) {
  std::string failed;
  for (const auto& a : r.summary.value("assertions", nlohmann::json::array()))
    if (!a["pass"].get<bool>()) failed += " [" + a["name"].get<std::string>() + "]";
  return {r.exit_code == kExitOk, fmt::format("exit {}{}{}", r.exit_code, failed, r.error)};
}

double max_coordinate_error(const Configuration& a, const Configuration& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.particles.size(); ++k) {
    Vec d = minimal_image(a.particles[k].x, b.particles[k].x);
    for (int c = 0; c < a.dim; ++c) e = std::max(e, std::abs(d[c]));
  }
  return e;
}

std::optional<double> dense_grid_contact(const ParticleState& a, const ParticleState& b, double eps,
                                         double t_max, double h) {
  auto dist = [&](double t) { return torus_distance(free_flight(a, t).x, free_flight(b, t).x); };
  double prev = 0.0;
  for (double t = h; t <= t_max + 1e-15; t += h) {
    if (dist(t) <= eps) {
      double lo = prev, hi = t;
      for (int k = 0; k < 60; ++k) {
        double mid = 0.5 * (lo + hi);
        (dist(mid) <= eps ? hi : lo) = mid;
      }
      return hi;
    }
    prev = t;
  }
  return std::nullopt;
}

Outcome conservation() {
  double worst_p = 0.0, worst_e = 0.0, long_x = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng g = make_stream(seed, stage_tag("acceptance-hs"), 0);
    auto c = sample_factorized(DensitySpec::maxwellian(2, 1.0), 20, 0.05, g);
    SimulationOptions o;
    o.stop_after_events = 1000;
    auto fwd = simulate(c, 1e6, o);
    if (fwd.log.events.size() != 1000) return {false, "fewer than 1000 events"};
    const double e0 = total_energy(c.particles);
    Vec p0 = total_momentum(c.particles), p1 = total_momentum(fwd.final.particles);
    for (int k = 0; k < 2; ++k) worst_p = std::max(worst_p, std::abs(p1[k] - p0[k]) / std::sqrt(e0));
    worst_e = std::max(worst_e, std::abs(total_energy(fwd.final.particles) - e0) / e0);
    // informational: over 1e3 events the reversal error saturates at O(1)
    long_x = std::max(long_x, max_coordinate_error(flow_backward(fwd.final, fwd.log.t_final), c));
  }
  // round trip at N = 20, tau = 1 on 20 fixed configurations
  double worst_x = 0.0;
  std::size_t over = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng g = make_stream(seed, stage_tag("acceptance-hs"), 1);
    auto c = sample_factorized(DensitySpec::maxwellian(2, 1.0), 20, 0.05, g);
    auto mid = simulate(c, 1.0);
    auto back = reverse_velocities(simulate(reverse_velocities(mid.final), 1.0).final);
    double e = max_coordinate_error(back, c);
    worst_x = std::max(worst_x, e);
    over += e >= 1e-6;
  }
  return {worst_p <= 1e-10 && worst_e <= 1e-10 && over == 0,
          fmt::format("1e3 events: momentum {:.2e} energy {:.2e}; tau = 1 return max {:.2e} "
                      "({} of 20 over 1e-6); 1e3-event return {:.2e} (not asserted)",
                      worst_p, worst_e, worst_x, over, long_x)};
}

Outcome collision_oracle() {
  double worst = 0.0;
  int mismatched = 0, hits = 0, pairs = 0;
  for (int dim : {2, 3}) {
    Rng g = make_stream(1, stage_tag("acceptance-contact"), dim);
    for (int k = 0; k < 5000; ++k) {
      ParticleState a{uniform_position(g, dim), gaussian_vec(g, dim, 1.0)};
      ParticleState b{uniform_position(g, dim), gaussian_vec(g, dim, 1.0)};
      if (torus_distance(a.x, b.x) < 0.05 + 1e-6) {
        --k;
        continue;
      }
      ++pairs;
      auto closed = pair_collision_time(a, b, 0.05, 1.0);
      auto oracle = dense_grid_contact(a, b, 0.05, 1.0, 2e-4);
      if (closed.time.has_value() != oracle.has_value()) {
        ++mismatched;
        continue;
      }
      if (oracle) {
        ++hits;
        worst = std::max(worst, std::abs(*closed.time - *oracle));
      }
    }
  }
  return {mismatched == 0 && worst < 1e-3,
          fmt::format("{} pairs, {} contacts, {} mismatched, max |dt| {:.2e}", pairs, hits,
                      mismatched, worst)};
}

Outcome fixed_points() {
  VelocityGrid g{2, 32, 5.0};
  auto M = project(g, [&](const Vec& v) { return maxwellian(v, 2, 1.0); });
  auto Q = collision_operator(g, M, {});
  double qmax = 0.0, fmax = 0.0;
  for (std::size_t k = 0; k < M.size(); ++k) {
    qmax = std::max(qmax, std::abs(Q[k]));
    fmax = std::max(fmax, M[k]);
  }
  Rng r = make_stream(1, stage_tag("acceptance-dsmc"), 0);
  auto init = dsmc_initial(DensitySpec::maxwellian(2, 1.0), 20000, r);
  DsmcOptions o;
  o.t_final = 1.0;
  o.dt = 0.01;
  o.snapshot_every = 10;
  auto run = dsmc_run(init, o, r);
  double min_p = 1.0;
  for (const auto& s : run.snapshots)
    min_p = std::min(min_p, velocity_chi_square(s.particles, 2, 1.0, Vec{}, 8, 3.0).p_value);
  return {qmax <= 1e-3 * fmax && min_p > 0.01,
          fmt::format("|Q(M,M)|/max M {:.2e}; DSMC {} snapshots, min p {:.3f}", qmax / fmax,
                      run.snapshots.size(), min_p)};
}

Outcome trees() {
  bool counts = true;
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s <= 5; ++s) {
      std::size_t expected = 1;
      for (int k = 0; k < s; ++k) expected *= static_cast<std::size_t>(n + k);
      counts = counts && enumerate_trees(n, s).size() == expected;
    }
  auto r = run_scenario("tree-vs-solver", "tree-vs-solver");
  auto o = scenario_outcome(r);
  o.pass = o.pass && counts;
  o.detail = fmt::format("counts {}; {}", counts ? "exact" : "WRONG", o.detail);
  return o;
}

Outcome one_sided() {
  const int n = 1, s = 2;
  const double eps = 0.01, t = 0.5;
  std::vector<ParticleState> Z{{Vec{0.5, 0.5, 0}, Vec{0.3, -0.2, 0}}};
  auto all = enumerate_trees(n, s);
  Rng g = make_stream(1, stage_tag("acceptance-one-sided"), 0);
  std::size_t good = 0, in_plus_only = 0, draws = 0;
  while (good < 1000 && draws < 100000) {
    TreeParameters p;
    sample_tree_parameters(s, t, 2, 0.5, g, p);
    auto tr = build_pseudo_trajectory(all[draws++ % all.size()], Z, t, p,
                                      {Variant::BBGKY, eps, 2, t});
    if (tr.classification != Classification::Good) continue;
    ++good;
    auto a = classify_admissible(tr.Z, n, t, eps, 2);
    in_plus_only += a.in_plus && !a.in_minus;
  }
  SeriesOptions so;
  so.samples = 100000;
  Rng h = make_stream(1, stage_tag("acceptance-one-sided"), 1);
  double boltzmann_rate = recollision_rate(n, s, t, Z, so, h);
  so.variant = Variant::BBGKY;
  std::vector<double> rates;
  for (double e : {0.02, 0.01, 0.005}) {
    so.eps = e;
    Rng q = make_stream(1, stage_tag("acceptance-one-sided"), 2);
    rates.push_back(recollision_rate(n, s, t, Z, so, q));
  }
  bool decreasing = rates[0] > rates[1] && rates[1] > rates[2];
  return {good >= 1000 && in_plus_only == good && boltzmann_rate == 0.0 && decreasing,
          fmt::format("{}/{} Good in B+ \\ B-; Boltzmann rate {}; BBGKY rates {:.4f} {:.4f} {:.4f}",
                      in_plus_only, good, boltzmann_rate, rates[0], rates[1], rates[2])};
}

std::map<std::string, std::string> csv_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Outcome determinism() {
  std::size_t files = 0;
  for (const char* name : {"badset-scaling", "chaos"}) {
    auto a = run_scenario(name, std::string(name) + "-rerun-a");
    auto b = run_scenario(name, std::string(name) + "-rerun-b");
    auto ca = csv_bytes(g_root / (std::string(name) + "-rerun-a"));
    auto cb = csv_bytes(g_root / (std::string(name) + "-rerun-b"));
    if (ca.empty() || ca != cb) return {false, fmt::format("{} CSV outputs differ", name)};
    files += ca.size();
  }
  return {true, fmt::format("{} CSV files byte-identical across reruns", files)};
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  g_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "boltzgrad_acceptance";
  fs::create_directories(g_root);

  criterion("conservation and reversibility", 10, conservation);
  criterion("collision-time oracle", 60, collision_oracle);
  criterion("bad-set geometry", 300,
            [] { return scenario_outcome(run_scenario("badset-scaling", "badset-scaling")); });
  criterion("H-theorem", 300, [] { return scenario_outcome(run_scenario("htheorem", "htheorem")); });
  criterion("equilibrium fixed points", 300, fixed_points);
  criterion("tree machinery", 900, trees);
  criterion("one-sided structure", 600, one_sided);
  criterion("counterexample", 1800,
            [] { return scenario_outcome(run_scenario("counterexample", "counterexample")); });
  criterion("chaos trend", 1800, [] { return scenario_outcome(run_scenario("chaos", "chaos")); });
  criterion("Loschmidt", 900, [] { return scenario_outcome(run_scenario("loschmidt", "loschmidt")); });
  criterion("determinism", 1800, determinism);

  fmt::print("{} of 11 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
