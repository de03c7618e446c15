#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/lanford.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

namespace {

EntropyProductionEstimate mc_dissipation(const ExperimentConfig& c, const HomogeneousState& s,
                                         std::size_t samples, std::uint64_t index) {
  GridInterpolant I(s.grid, s.f);
  EntropyProductionOptions o;
  o.samples = samples;
  o.dim = s.grid.dim;
  o.proposal_beta = 0.5 * c.num("beta");
  Rng g = stream(c, "htheorem-dissipation", index);
  return entropy_production([&](const Vec& v) { return I(v); }, o, g);
}

}  // namespace

void run_htheorem(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = DensitySpec::two_bump(static_cast<int>(c.num("dim")), c.num("beta"),
                                               c.num("shift"));
  const VelocityGrid grid = make_grid(c);
  HomogeneousState s0{grid, project(grid, [&](const Vec& v) { return f0.velocity_density(v); }), 0.0};
  SolverOptions opt;
  opt.collision = make_collision(c);
  opt.output_every = 1;
  const auto fwd =
      solve_homogeneous(s0, c.num("t_final"), c.num("dt"), TimeDirection::Forward, opt);
  const auto M = moment_matched_maxwellian(grid, s0.f);

  // Relative entropy to the moment-matched Maxwellian at every step.
  std::vector<double> H;
  for (const auto& st : fwd.states) H.push_back(relative_entropy(st.f, M, grid.weight()));
  double worst = -INFINITY;
  for (std::size_t k = 1; k < H.size(); ++k) worst = std::max(worst, H[k] - H[k - 1]);
  const double slack = c.num("entropy_slack");
  out.assert_that("relative entropy nonincreasing at every step", worst <= slack,
                  {{"max_increase", worst}, {"slack", slack}, {"steps", H.size() - 1}});

  // Monte Carlo dissipation along the trajectory.
  EntropyTrace trace;
  const std::size_t every = c.count("output_every");
  bool nonneg = true;
  double worst_z = INFINITY;
  for (std::size_t k = 0; k < fwd.states.size(); ++k) {
    if (k % every != 0 && k + 1 != fwd.states.size()) continue;
    auto D = mc_dissipation(c, fwd.states[k], c.count(k == 0 ? "d_samples" : "d_samples_trace"), k);
    trace.times.push_back(fwd.states[k].t);
    trace.S.push_back(grid_entropy(grid, fwd.states[k].f));
    trace.S_stderr.push_back(0.0);
    trace.D.push_back(D.value);
    trace.D_stderr.push_back(D.stderr);
    if (D.value < -3.0 * D.stderr) nonneg = false;
    worst_z = std::min(worst_z, D.stderr > 0 ? D.value / D.stderr : INFINITY);
  }
  out.assert_that("D(f) >= -3 stderr along the forward solve", nonneg, {{"min_z", worst_z}});
  const double z0 = trace.D[0] / trace.D_stderr[0];
  out.assert_that("D(f0) > 5 stderr", z0 > 5.0,
                  {{"D", trace.D[0]}, {"stderr", trace.D_stderr[0]}, {"z", z0}});

  HomogeneousState sm{grid, project(grid, [&](const Vec& v) {
                        return maxwellian(v, grid.dim, c.num("beta"));
                      }), 0.0};
  auto Dm = mc_dissipation(c, sm, c.count("d_samples"), 1u << 20);
  out.assert_that("D(Maxwellian) = 0 within 3 stderr",
                  std::abs(Dm.value) <= 3.0 * Dm.stderr || Dm.value == 0.0,
                  {{"D", Dm.value}, {"stderr", Dm.stderr}});

  // Reverse solve from the same data over a short horizon.
  const auto lt = lanford_time(c.num("beta"), f0.mu, c.num("lambda_margin"), grid.dim);
  double t_rev = c.num("reverse_t") > 0 ? c.num("reverse_t") : 0.1 * lt.t_star;
  SolverOptions ropt = opt;
  ropt.reverse_horizon = std::max(t_rev, 0.1 * lt.t_star);
  const double rdt = std::min(c.num("dt"), t_rev / 4.0);
  auto rev = solve_homogeneous(s0, t_rev, rdt, TimeDirection::Reverse, ropt);
  std::vector<double> Hr;
  for (const auto& st : rev.states) Hr.push_back(relative_entropy(st.f, M, grid.weight()));
  bool rev_up = true;
  for (std::size_t k = 1; k < Hr.size(); ++k) rev_up = rev_up && Hr[k] >= Hr[k - 1] - slack;
  out.assert_that("reverse solve: relative entropy nondecreasing", rev_up,
                  {{"t_reverse", t_rev}, {"stopped_negative", rev.stopped_negative}});

  std::ostringstream tf, tr, et, hc;
  write_trace_csv(tf, fwd.trace, grid.dim);
  write_trace_csv(tr, rev.trace, grid.dim);
  write_entropy_trace_csv(et, trace);
  hc << "direction,t,relative_entropy\n";
  for (std::size_t k = 0; k < H.size(); ++k)
    hc << "forward," << fmt_double(fwd.states[k].t) << "," << fmt_double(H[k]) << "\n";
  for (std::size_t k = 0; k < Hr.size(); ++k)
    hc << "reverse," << fmt_double(-rev.states[k].t) << "," << fmt_double(Hr[k]) << "\n";
  out.write("htheorem_forward_trace.csv", tf.str());
  out.write("htheorem_reverse_trace.csv", tr.str());
  out.write("htheorem_entropy_trace.csv", et.str());
  out.write("htheorem_relative_entropy.csv", hc.str());
  std::ostringstream g0, g1;
  write_grid_csv(g0, fwd.states.front());
  write_grid_csv(g1, fwd.states.back());
  out.write("htheorem_grid_t0.csv", g0.str());
  out.write("htheorem_grid_final.csv", g1.str());
  out.note("t_star", lt.t_star);
  out.note("D_maxwellian", Dm.value);
}

}  // namespace boltzgrad::experiments
