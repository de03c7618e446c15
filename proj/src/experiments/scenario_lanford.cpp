#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/lanford.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

void run_lanford(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = make_density(c);
  const int d = f0.dim;
  const double t = c.num("t");
  const auto lt = lanford_time(f0.beta, f0.mu, c.num("lambda_margin"), d);
  if (t > lt.t_star)
    out.warn(fmt::format("t = {} exceeds the Lanford time t* = {:.4g}", t, lt.t_star));

  const VelocityGrid grid = make_grid(c);
  HomogeneousState s0{grid, project(grid, [&](const Vec& v) { return f0.velocity_density(v); }), 0.0};
  SolverOptions opt;
  opt.collision = make_collision(c);
  auto sol = solve_homogeneous(s0, t, std::min(c.num("dt"), t), TimeDirection::Forward, opt);
  const int bins = static_cast<int>(c.count("velocity_bins"));
  const auto boltz = coarse_grid_density(grid, sol.states.back().f, bins);

  std::ostringstream disc;
  disc << "N,eps";
  for (int a = 1; a <= d; ++a) disc << ",v_" << a;
  disc << ",particle,stderr,boltzmann,diff\n";
  nlohmann::json trend = nlohmann::json::array();
  bool normalized = true;
  for (double Nd : c.list("N_list")) {
    const auto N = static_cast<std::size_t>(Nd);
    const double eps = scaled_eps(Nd, c.num("N_eps"), d);
    auto ens = evolve(sample_ensemble(c, f0, N, eps, c.count("replicas"), "lanford-initial"), t);
    auto part = coarse_particle_density(ens, bins, grid.v_cut, d);
    double max_z = 0.0, max_diff = 0.0, mass = 0.0;
    const double vol = std::pow(2.0 * grid.v_cut / bins, d);
    for (std::size_t k = 0; k < part.value.size(); ++k) {
      double diff = part.value[k] - boltz.value[k];
      disc << fmt::format("{},{}", N, fmt_double(eps));
      for (int a = 0; a < d; ++a) disc << "," << fmt_double(part.centers[k][a]);
      disc << fmt::format(",{},{},{},{}\n", fmt_double(part.value[k]), fmt_double(part.stderr[k]),
                          fmt_double(boltz.value[k]), fmt_double(diff));
      max_diff = std::max(max_diff, std::abs(diff));
      if (part.stderr[k] > 0) max_z = std::max(max_z, std::abs(diff) / part.stderr[k]);
      mass += part.value[k] * vol;
    }
    normalized = normalized && mass <= 1.0 + 1e-9;
    trend.push_back({{"N", N}, {"eps", eps}, {"max_abs_diff", max_diff}, {"max_z", max_z}});

    auto marg = estimate_marginal(ens, 1, PhaseCellGrid::defaults(d, f0.beta));
    std::ostringstream mc;
    write_marginal_csv(mc, marg);
    out.write(fmt::format("lanford_marginal_N{}.csv", N), mc.str());
  }
  out.write("lanford_discrepancy.csv", disc.str());
  out.assert_that("velocity marginals carry at most unit mass", normalized);
  out.note("trend", trend);
  out.note("t_star", lt.t_star);
}

}  // namespace boltzgrad::experiments
