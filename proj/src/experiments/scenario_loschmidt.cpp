#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/lanford.hpp"
#include "boltzgrad/parallel.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

namespace {

struct Stats {
  double Sp0, Sp1, Sp2, Sb1, Sb2;
  double divergence() const { return (Sb2 - Sb1) - (Sp2 - Sp1); }
};

Stats compute(const ExperimentConfig& c, const VelocityGrid& grid, const Ensemble& e0,
              const Ensemble& e1, const Ensemble& reversed, const Ensemble& e2, double tau) {
  Stats s;
  s.Sp0 = histogram_grid_entropy(e0, grid);
  s.Sp1 = histogram_grid_entropy(reversed, grid);
  s.Sp2 = histogram_grid_entropy(e2, grid);
  (void)e1;
  HomogeneousState h{grid, histogram_density(reversed, grid, c.num("mix"), c.num("beta")), tau};
  SolverOptions opt;
  opt.collision = make_collision(c);
  auto tr = solve_homogeneous(h, tau, tau / static_cast<double>(c.count("steps")),
                              TimeDirection::Forward, opt);
  s.Sb1 = grid_entropy(grid, h.f);
  s.Sb2 = grid_entropy(grid, tr.states.back().f);
  return s;
}

Ensemble subset(const Ensemble& e, std::size_t groups, std::size_t drop) {
  Ensemble out;
  for (std::size_t r = 0; r < e.size(); ++r)
    if (r % groups != drop) out.push_back(e[r]);
  return out;
}

}  // namespace

void run_loschmidt(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = make_density(c);
  const int d = f0.dim;
  const auto lt = lanford_time(f0.beta, f0.mu, c.num("lambda_margin"), d);
  const double tau = c.num("tau") > 0 ? c.num("tau") : 0.5 * lt.t_star;
  if (tau >= lt.t_star) out.warn(fmt::format("tau = {} is not below t* = {:.4g}", tau, lt.t_star));
  const std::size_t N = c.count("N");
  const double eps = c.num("eps");
  const auto e0 = sample_ensemble(c, f0, N, eps, c.count("replicas"), "loschmidt-initial");
  Ensemble e1(e0.size()), rev(e0.size()), e2(e0.size());
  std::vector<double> pos_err(e0.size()), vel_err(e0.size());
  parallel_for(e0.size(), [&](std::size_t r) {
    e1[r] = simulate(e0[r], tau).final;
    rev[r] = reverse_velocities(e1[r]);
    e2[r] = simulate(rev[r], tau).final;
    double pe = 0.0, ve = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      Vec dx = minimal_image(e2[r].particles[k].x, e0[r].particles[k].x);
      Vec dv = e2[r].particles[k].v + e0[r].particles[k].v;
      for (int a = 0; a < d; ++a) {
        pe = std::max(pe, std::abs(dx[a]));
        ve = std::max(ve, std::abs(dv[a]));
      }
    }
    pos_err[r] = pe;
    vel_err[r] = ve;
  });
  double max_pos = 0.0;
  std::ostringstream ret;
  ret << "replica,position_error,velocity_error\n";
  for (std::size_t r = 0; r < e0.size(); ++r) {
    max_pos = std::max(max_pos, pos_err[r]);
    ret << fmt::format("{},{},{}\n", r, fmt_double(pos_err[r]), fmt_double(vel_err[r]));
  }
  out.write("loschmidt_return.csv", ret.str());
  out.assert_that("microscopic return error below 1e-6", max_pos < 1e-6, {{"max_error", max_pos}});

  const VelocityGrid grid = make_grid(c);
  const Stats full = compute(c, grid, e0, e1, rev, e2, tau);
  const std::size_t G = c.count("groups");
  std::vector<Stats> jack;
  for (std::size_t g = 0; g < G; ++g)
    jack.push_back(compute(c, grid, subset(e0, G, g), subset(e1, G, g), subset(rev, G, g),
                           subset(e2, G, g), tau));
  auto jk_err = [&](auto field) {
    double mean = 0.0;
    for (const auto& s : jack) mean += field(s);
    mean /= static_cast<double>(G);
    double v = 0.0;
    for (const auto& s : jack) v += (field(s) - mean) * (field(s) - mean);
    return std::sqrt(v * (G - 1.0) / static_cast<double>(G));
  };
  const double div = full.divergence();
  const double div_err = jk_err([](const Stats& s) { return s.divergence(); });
  out.assert_that("Boltzmann entropy fails to retrace after reversal (> 5 stderr)",
                  div > 5.0 * div_err,
                  {{"divergence", div}, {"stderr", div_err},
                   {"delta_S_boltzmann", full.Sb2 - full.Sb1},
                   {"delta_S_particles", full.Sp2 - full.Sp1}, {"tau", tau}});

  EntropyTrace tp, tb;
  tp.times = {0.0, tau, 2.0 * tau};
  tp.S = {full.Sp0, full.Sp1, full.Sp2};
  tp.S_stderr = {jk_err([](const Stats& s) { return s.Sp0; }),
                 jk_err([](const Stats& s) { return s.Sp1; }),
                 jk_err([](const Stats& s) { return s.Sp2; })};
  tb.times = {tau, 2.0 * tau};
  tb.S = {full.Sb1, full.Sb2};
  tb.S_stderr = {jk_err([](const Stats& s) { return s.Sb1; }),
                 jk_err([](const Stats& s) { return s.Sb2; })};
  std::ostringstream a, b;
  write_entropy_trace_csv(a, tp);
  write_entropy_trace_csv(b, tb);
  out.write("loschmidt_entropy_particles.csv", a.str());
  out.write("loschmidt_entropy_boltzmann.csv", b.str());
  out.note("tau", tau);
  out.note("t_star", lt.t_star);
}

}  // namespace boltzgrad::experiments
