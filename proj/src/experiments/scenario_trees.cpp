#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/lanford.hpp"
#include "boltzgrad/stats.hpp"
#include "boltzgrad/trees.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

void run_tree_vs_solver(const ExperimentConfig& c, RunOutput& out) {
  const int d = static_cast<int>(c.num("dim"));
  const int n = static_cast<int>(c.count("n"));
  const int s_max = static_cast<int>(c.count("s_max"));
  const double beta = c.num("beta");
  const DensitySpec f0 = DensitySpec::two_bump(d, beta, c.num("shift"));
  const DensitySpec M = DensitySpec::maxwellian(d, beta);
  const auto xs = c.list("x");
  const auto vs = c.list("v");
  ParticleState z;
  for (int a = 0; a < d; ++a) {
    z.x[a] = xs[a];
    z.v[a] = vs[a];
  }
  std::vector<ParticleState> Z(static_cast<std::size_t>(n), z);
  for (int k = 1; k < n; ++k) Z[k].x[0] = std::fmod(Z[k].x[0] + 0.5 * k / n, 1.0);

  const auto lt = lanford_time(beta, f0.mu, c.num("lambda_margin"), d);
  const double t = c.num("t_fraction") * lt.t_star;
  SeriesOptions so;
  so.samples = c.count("samples");
  so.proposal_beta = c.num("proposal_beta");
  so.dim = d;

  std::ostringstream csv;
  write_series_csv_header(csv);
  double partial = 0.0, partial_var = 0.0;
  for (int s = 0; s <= s_max; ++s) {
    Rng g = stream(c, "trees-series", static_cast<std::uint64_t>(s));
    auto e = evaluate_series_term(n, s, t, f0, Z, so, g);
    write_series_csv_row(csv, n, s, t, "boltzmann", e);
    partial += e.estimate;
    partial_var += e.stderr * e.stderr;
  }
  const double partial_err = std::sqrt(partial_var);

  double solver = NAN;
  if (n == 1) {
    const VelocityGrid grid = make_grid(c);
    HomogeneousState s0{grid, project(grid, [&](const Vec& v) { return f0.velocity_density(v); }),
                        0.0};
    SolverOptions opt;
    opt.collision = make_collision(c);
    auto tr = solve_homogeneous(s0, t, t / static_cast<double>(c.count("solver_steps")),
                                TimeDirection::Forward, opt);
    solver = GridInterpolant(grid, tr.states.back().f)(z.v);
    const double tol = std::max(3.0 * partial_err, c.num("relative_tolerance") * std::abs(solver));
    out.assert_that("partial Duhamel sum matches the homogeneous solver",
                    std::abs(partial - solver) <= tol,
                    {{"partial_sum", partial}, {"stderr", partial_err}, {"solver", solver},
                     {"tolerance", tol}, {"t", t}});
  }

  // Equilibrium: every s >= 1 term vanishes.
  // Sign-flip averaging cancels each Maxwellian draw to round-off, so the
  // check uses plain draws; the averaged values are kept as notes.
  SeriesOptions plain = so;
  plain.antithetic = false;
  bool eq_ok = true;
  nlohmann::json eq = nlohmann::json::array(), eq_avg = nlohmann::json::array();
  for (int s = 1; s <= s_max; ++s) {
    Rng g = stream(c, "trees-equilibrium", static_cast<std::uint64_t>(s));
    auto e = evaluate_series_term(n, s, t, M, Z, plain, g);
    write_series_csv_row(csv, n, s, t, "boltzmann-maxwellian", e);
    eq_ok = eq_ok && std::abs(e.estimate) <= 3.0 * e.stderr;
    eq.push_back({{"s", s}, {"estimate", e.estimate}, {"stderr", e.stderr}});
    Rng h = stream(c, "trees-equilibrium-averaged", static_cast<std::uint64_t>(s));
    auto a = evaluate_series_term(n, s, t, M, Z, so, h);
    eq_avg.push_back({{"s", s}, {"estimate", a.estimate}});
  }
  out.note("equilibrium_sign_averaged", eq_avg);
  out.assert_that("equilibrium terms vanish within 3 stderr", eq_ok, {{"terms", eq}});

  // Small-time scaling of each term.
  const auto times = c.list("slope_times");
  const double stol = c.num("slope_tolerance");
  SeriesOptions slope_opt = so;
  slope_opt.samples = c.count("slope_samples");
  bool slope_ok = true;
  nlohmann::json slopes = nlohmann::json::array();
  for (int s = 1; s <= s_max; ++s) {
    std::vector<double> mags;
    for (std::size_t k = 0; k < times.size(); ++k) {
      Rng g = stream(c, "trees-slope", static_cast<std::uint64_t>(s * 100 + k));
      auto e = evaluate_series_term(n, s, times[k], f0, Z, slope_opt, g);
      write_series_csv_row(csv, n, s, times[k], "boltzmann", e);
      mags.push_back(std::abs(e.estimate));
    }
    double slope = loglog_slope(times, mags);
    slope_ok = slope_ok && std::abs(slope - s) <= stol;
    slopes.push_back({{"s", s}, {"slope", slope}});
  }
  out.assert_that("term magnitude slope in t equals s", slope_ok,
                  {{"slopes", slopes}, {"tolerance", stol}});
  out.write("series.csv", csv.str());
  out.note("t_star", lt.t_star);
  out.note("t", t);
  out.note("partial_sum", partial);
  out.note("solver", solver);
}

}  // namespace boltzgrad::experiments
