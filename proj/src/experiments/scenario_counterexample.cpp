#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/initial_data.hpp"
#include "boltzgrad/parallel.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

namespace {

// Distance on the torus between the position boxes of two cells.
double box_gap(const PhaseCell& a, const PhaseCell& b) {
  double s = 0.0;
  for (int k = 0; k < a.dim; ++k) {
    double lo = b.x_lo[k] - a.x_hi[k], hi = a.x_lo[k] - b.x_hi[k];
    double g = std::max({0.0, lo, hi});
    // wrapped separation
    double w = std::max(0.0, std::min(1.0 + a.x_lo[k] - b.x_hi[k], 1.0 + b.x_lo[k] - a.x_hi[k]));
    g = std::min(g, w);
    s += g * g;
  }
  return std::sqrt(s);
}

}  // namespace

void run_counterexample(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = make_density(c);
  const int d = f0.dim;
  const double eps = c.num("eps");
  const double delta = c.num("delta");
  const double mu = activity(eps, d);
  const std::size_t replicas = c.count("replicas");

  std::vector<GrandCanonicalSample> samples(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    Rng g = stream(c, "counterexample-initial", r);
    samples[r] = sample_grand_canonical(f0, eps, ConditioningSpec{delta}, g);
  });
  Ensemble e0(replicas), e1(replicas), free(replicas);
  std::vector<std::size_t> events(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    e0[r] = samples[r].config;
    auto res = simulate(e0[r], delta);
    e1[r] = res.final;
    events[r] = res.log.events.size();
    free[r] = e0[r];
    for (auto& z : free[r].particles) z.x = wrap_position(z.x + delta * z.v);
  });
  std::size_t colliding = 0, particles = 0, rejected = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    colliding += events[r] > 0;
    particles += samples[r].n;
    rejected += samples[r].accepted_after;
  }
  out.assert_that("no collisions on [0, delta] in every replica", colliding == 0,
                  {{"replicas_with_events", colliding}, {"replicas", replicas}});

  // Order-1 phase-space marginal at delta against the free transport of the initial ensemble.
  PhaseCellGrid mg;
  mg.dim = d;
  mg.position_bins = static_cast<int>(c.count("probe_position_bins"));
  mg.velocity_bins = static_cast<int>(c.count("probe_velocity_bins"));
  mg.R = c.num("probe_velocity_R");
  const auto m1 = estimate_marginal(e1, 1, mg);
  const auto mf = estimate_marginal(free, 1, mg);
  std::size_t outside = 0;
  double max_z = 0.0;
  for (std::size_t k = 0; k < m1.values.size(); ++k) {
    const double diff = std::abs(m1.values[k] - mf.values[k]);
    const double se = std::hypot(m1.stderr[k], mf.stderr[k]);
    if (diff > 3.0 * se) ++outside;
    if (se > 0) max_z = std::max(max_z, diff / se);
  }
  out.assert_that("marginal at delta equals free transport within 3 stderr per cell", outside == 0,
                  {{"cells_outside", outside}, {"cells", m1.values.size()}, {"max_z", max_z}});
  std::ostringstream mc;
  write_marginal_csv(mc, m1);
  out.write("counterexample_marginal_delta.csv", mc.str());

  // Boltzmann from the same velocity data against free transport.
  const VelocityGrid grid = make_grid(c);
  HomogeneousState s0{grid, histogram_density(e0, grid, c.num("mix"), f0.beta), 0.0};
  SolverOptions opt;
  opt.collision = make_collision(c);
  auto sol = solve_homogeneous(s0, delta, std::min(c.num("dt"), delta), TimeDirection::Forward, opt);
  const int bins = static_cast<int>(c.count("compare_bins"));
  const auto boltz = coarse_grid_density(grid, sol.states.back().f, bins);
  const auto ft = coarse_grid_density(grid, s0.f, bins);
  const auto part = coarse_particle_density(e1, bins, grid.v_cut, d);
  std::ostringstream bc;
  for (int a = 1; a <= d; ++a) bc << (a > 1 ? "," : "") << "v_" << a;
  bc << ",particle,stderr,free_transport,boltzmann,z\n";
  double max_bz = 0.0;
  for (std::size_t k = 0; k < boltz.value.size(); ++k) {
    const double z = part.stderr[k] > 0 ? std::abs(boltz.value[k] - ft.value[k]) / part.stderr[k] : 0.0;
    max_bz = std::max(max_bz, z);
    for (int a = 0; a < d; ++a) bc << (a > 0 ? "," : "") << fmt_double(part.centers[k][a]);
    bc << fmt::format(",{},{},{},{},{}\n", fmt_double(part.value[k]), fmt_double(part.stderr[k]),
                      fmt_double(ft.value[k]), fmt_double(boltz.value[k]), fmt_double(z));
  }
  out.write("counterexample_boltzmann.csv", bc.str());
  out.assert_that("Boltzmann departs from free transport by > 5 stderr in some cell", max_bz > 5.0,
                  {{"max_z", max_bz}});

  // Chaos probe on pairs of cells separated beyond the pre-collisional reach.
  const double reach = eps * std::abs(std::log(eps)) + delta * 2.0 * mg.R * std::sqrt(double(d));
  std::vector<CellPair> far;
  for (std::size_t a = 0; a < mg.cell_count(); ++a)
    for (std::size_t b = a + 1; b < mg.cell_count(); ++b) {
      auto ca = mg.cell(a), cb = mg.cell(b);
      if (box_gap(ca, cb) > reach) far.emplace_back(ca, cb);
    }
  const std::size_t max_pairs = c.count("max_pairs");
  std::vector<CellPair> probe;
  const std::size_t stride = far.size() > max_pairs ? (far.size() + max_pairs - 1) / max_pairs : 1;
  for (std::size_t k = 0; k < far.size(); k += stride) probe.push_back(far[k]);
  if (probe.empty()) throw Error(ErrorCode::InvalidParameters, "no cell pairs beyond the probe reach");
  DefectNormalization norm;
  norm.kind = DefectNormalization::Correlation;
  norm.mu = mu;
  const auto chaos = chaos_defect(e1, probe, norm);
  std::size_t within = 0;
  std::ostringstream cc;
  cc << "pair,f2,f1a,f1b,defect,stderr\n";
  for (std::size_t k = 0; k < chaos.pairs.size(); ++k) {
    const auto& p = chaos.pairs[k];
    within += std::abs(p.defect) <= 3.0 * p.stderr;
    cc << fmt::format("{},{},{},{},{},{}\n", k, fmt_double(p.f2), fmt_double(p.f1a),
                      fmt_double(p.f1b), fmt_double(p.defect), fmt_double(p.stderr));
  }
  out.write("counterexample_chaos.csv", cc.str());
  const double frac = static_cast<double>(within) / static_cast<double>(chaos.pairs.size());
  out.assert_that("chaos defect off the bad set within 3 stderr on >= 95% of pairs", frac >= 0.95,
                  {{"fraction", frac}, {"pairs", chaos.pairs.size()}, {"reach", reach}});

  out.note("mu", mu);
  out.note("mean_particles", static_cast<double>(particles) / replicas);
  out.note("mean_rejections", static_cast<double>(rejected) / replicas);
}

}  // namespace boltzgrad::experiments
