#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/lanford.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

void run_concatenation(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = make_density(c);
  const int d = f0.dim;
  const double tau = c.num("tau");
  const double tau2 = c.num("tau_prime");
  if (!(tau > 0 && tau2 > tau))
    throw Error(ErrorCode::InvalidParameters, "need 0 < tau < tau_prime");
  const auto lt = lanford_time(f0.beta, f0.mu, 1.0, d);
  if (tau2 > lt.t_star)
    out.warn(fmt::format("tau' = {} exceeds t* = {:.4g}", tau2, lt.t_star));

  const VelocityGrid grid = make_grid(c);
  SolverOptions opt;
  opt.collision = make_collision(c);
  const double dt = c.num("dt");
  HomogeneousState s0{grid, project(grid, [&](const Vec& v) { return f0.velocity_density(v); }), 0.0};
  auto direct = solve_homogeneous(s0, tau2, std::min(dt, tau2), TimeDirection::Forward, opt);

  const std::size_t N = c.count("N");
  const double eps = scaled_eps(static_cast<double>(N), c.num("N_eps"), d);
  auto ens = evolve(sample_ensemble(c, f0, N, eps, c.count("replicas"), "concatenation-initial"), tau);
  HomogeneousState restart{grid, histogram_density(ens, grid, c.num("mix"), f0.beta), tau};
  const double span = tau2 - tau;
  auto restarted = solve_homogeneous(restart, span, std::min(dt, span), TimeDirection::Forward, opt);

  const int bins = static_cast<int>(c.count("compare_bins"));
  const auto a = coarse_grid_density(grid, direct.states.back().f, bins);
  const auto b = coarse_grid_density(grid, restarted.states.back().f, bins);
  // Statistical scale of the restart data: the particle histogram at tau.
  const auto p = coarse_particle_density(ens, bins, grid.v_cut, d);

  std::ostringstream csv;
  for (int k = 1; k <= d; ++k) csv << (k > 1 ? "," : "") << "v_" << k;
  csv << ",direct,restarted,diff,particle_tau,particle_stderr\n";
  double max_diff = 0.0, max_z = 0.0;
  for (std::size_t k = 0; k < a.value.size(); ++k) {
    const double diff = b.value[k] - a.value[k];
    for (int q = 0; q < d; ++q) csv << (q > 0 ? "," : "") << fmt_double(a.centers[k][q]);
    csv << fmt::format(",{},{},{},{},{}\n", fmt_double(a.value[k]), fmt_double(b.value[k]),
                       fmt_double(diff), fmt_double(p.value[k]), fmt_double(p.stderr[k]));
    max_diff = std::max(max_diff, std::abs(diff));
    if (p.stderr[k] > 0) max_z = std::max(max_z, std::abs(diff) / p.stderr[k]);
  }
  out.write("concatenation_compare.csv", csv.str());

  std::ostringstream td, tr;
  write_trace_csv(td, direct.trace, d);
  write_trace_csv(tr, restarted.trace, d);
  out.write("concatenation_direct_trace.csv", td.str());
  out.write("concatenation_restart_trace.csv", tr.str());

  const double max_f = *std::max_element(a.value.begin(), a.value.end());
  out.note("max_abs_diff", max_diff);
  out.note("max_relative_diff", max_diff / max_f);
  out.note("max_z", max_z);
  out.note("t_star", lt.t_star);
  out.note("eps", eps);
}

}  // namespace boltzgrad::experiments
