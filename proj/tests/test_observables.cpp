#include <doctest.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/density.hpp"
#include "boltzgrad/error.hpp"
#include "boltzgrad/homogeneous_solver.hpp"
#include "boltzgrad/observables.hpp"
#include "boltzgrad/stats.hpp"

using namespace boltzgrad;

namespace {

Ensemble iid_ensemble(const DensitySpec& f0, std::size_t N, std::size_t replicas, std::uint64_t seed) {
  Rng g = make_stream(seed, stage_tag("test-obs"), 0);
  Ensemble e(replicas);
  for (auto& c : e) {
    c.dim = f0.dim;
    for (std::size_t k = 0; k < N; ++k)
      c.particles.push_back({sample_position(f0, g), sample_velocity(f0, g)});
  }
  return e;
}

// Brute-force (1/4) sum over a velocity grid and uniform angles.
double quadrature_D(const DensitySpec& f0, int n, double L, int angles) {
  const double h = 2 * L / n;
  std::vector<Vec> v;
  std::vector<double> fv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      v.push_back(Vec{-L + (i + 0.5) * h, -L + (j + 0.5) * h, 0});
      fv.push_back(f0.velocity_density(v.back()));
    }
  std::vector<Vec> nu;
  for (int m = 0; m < angles; ++m) {
    double th = 2 * M_PI * (m + 0.5) / angles;
    nu.push_back(Vec{std::cos(th), std::sin(th), 0});
  }
  double D = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b) {
      if (fv[a] * fv[b] < 1e-30) continue;
      for (const Vec& u : nu) {
        double c = dot(v[a] - v[b], u);
        if (c <= 0) continue;
        Vec vp = v[a] - c * u, v1p = v[b] + c * u;
        double x = f0.velocity_density(vp) * f0.velocity_density(v1p), y = fv[a] * fv[b];
        if (x <= 0) continue;
        D += (x - y) * std::log(x / y) * c;
      }
    }
  return 0.25 * D * std::pow(h, 4) * 2 * M_PI / angles;
}

}  // namespace

TEST_CASE("order-1 marginal of single-particle draws matches f0 per cell") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  auto e = iid_ensemble(f0, 1, 40000, 1);
  PhaseCellGrid g{2, 2, 4, 2.0};
  auto m = estimate_marginal(e, 1, g);
  int within = 0;
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    PhaseCell c = g.cell(k);
    double p = 1.0;
    for (int a = 0; a < 2; ++a)
      p *= (c.x_hi[a] - c.x_lo[a]) * gaussian_interval_probability(c.v_lo[a], c.v_hi[a], 0, 1);
    within += std::abs(m.values[k] - p / c.volume()) <= 3.0 * m.stderr[k];
  }
  CHECK(within >= static_cast<int>(0.95 * m.values.size()));
}

TEST_CASE("order-1 marginal integrates to the mass inside the velocity box") {
  auto f0 = DensitySpec::two_bump(2, 1.0);
  auto e = iid_ensemble(f0, 10, 500, 2);
  PhaseCellGrid g = PhaseCellGrid::defaults(2, 1.0);
  auto m = estimate_marginal(e, 1, g);
  double mass = 0.0;
  for (double v : m.values) mass += v * g.cell_volume();
  CHECK(mass <= 1.0 + 1e-12);
  CHECK(mass > 0.99);
}

TEST_CASE("order-2 marginal of independent pairs factorizes") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  auto e = iid_ensemble(f0, 2, 50000, 3);
  PhaseCellGrid g{2, 1, 3, 1.5};
  auto m1 = estimate_marginal(e, 1, g);
  auto m2 = estimate_marginal(e, 2, g);
  const std::size_t cc = g.cell_count();
  int within = 0;
  for (std::size_t a = 0; a < cc; ++a)
    for (std::size_t b = 0; b < cc; ++b) {
      double prod = m1.values[a] * m1.values[b];
      double se = std::hypot(m2.stderr[a * cc + b],
                             std::hypot(m1.stderr[a] * m1.values[b], m1.stderr[b] * m1.values[a]));
      within += std::abs(m2.values[a * cc + b] - prod) <= 3.0 * se;
    }
  CHECK(within >= static_cast<int>(0.95 * cc * cc));
}

TEST_CASE("order-2 marginal refuses oversized grids") {
  Ensemble e = iid_ensemble(DensitySpec::maxwellian(2, 1.0), 2, 2, 4);
  PhaseCellGrid g{2, 8, 16, 4.0};
  CHECK_THROWS_AS(estimate_marginal(e, 2, g), Error);
}

TEST_CASE("chaos defect of an iid ensemble vanishes within error") {
  auto f0 = DensitySpec::two_bump(2, 1.0);
  auto e = iid_ensemble(f0, 16, 4000, 5);
  PhaseCellGrid g{2, 2, 2, 2.0};
  std::vector<CellPair> pairs;
  for (std::size_t a = 0; a < g.cell_count(); ++a)
    for (std::size_t b = a + 1; b < g.cell_count(); ++b) pairs.emplace_back(g.cell(a), g.cell(b));
  auto r = chaos_defect(e, pairs);
  int within = 0;
  for (const auto& p : r.pairs) within += std::abs(p.defect) <= 3.0 * p.stderr;
  CHECK(within >= static_cast<int>(0.95 * pairs.size()));
  CHECK(r.max_abs == doctest::Approx(std::abs(r.pairs[r.argmax].defect)));
}

TEST_CASE("relative entropy: zero at M, positive otherwise, grid converged") {
  auto value = [](int n) {
    VelocityGrid g{2, n, 6.0};
    auto f0 = DensitySpec::two_bump(2, 1.0);
    auto f = project(g, [&](const Vec& v) { return f0.velocity_density(v); });
    auto M = moment_matched_maxwellian(g, f);
    CHECK(relative_entropy(M, M, g.weight()) == 0.0);
    return relative_entropy(f, M, g.weight());
  };
  double coarse = value(32), fine = value(64);
  CHECK(coarse > 0);
  CHECK(std::abs(coarse - fine) <= 0.01 * fine);
  CHECK_THROWS_AS(relative_entropy({-1.0, 1.0}, {1.0, 1.0}, 1.0), Error);
}

TEST_CASE("entropy production of a Maxwellian is exactly zero") {
  EntropyProductionOptions o;
  o.samples = 100000;
  Rng g = make_stream(6, stage_tag("test-obs"), 0);
  auto r = entropy_production([](const Vec& v) { return maxwellian(v, 2, 1.0); }, o, g);
  CHECK(r.value == 0.0);
}

TEST_CASE("entropy production of the two-bump matches brute-force quadrature") {
  auto f0 = DensitySpec::two_bump(2, 1.0);
  EntropyProductionOptions o;
  o.samples = 1000000;
  Rng g = make_stream(7, stage_tag("test-obs"), 0);
  auto r = entropy_production([&](const Vec& v) { return f0.velocity_density(v); }, o, g);
  const double oracle = quadrature_D(f0, 40, 5.0, 32);
  CHECK(r.value > 5.0 * r.stderr);
  CHECK(std::abs(r.value - oracle) <= 3.0 * r.stderr + 0.005 * oracle);
}

TEST_CASE("entropy trace CSV schema") {
  EntropyTrace t;
  t.times = {0.0};
  t.S = {1.0};
  t.D = {0.5};
  t.S_stderr = {0.0};
  t.D_stderr = {0.1};
  std::ostringstream out;
  write_entropy_trace_csv(out, t);
  CHECK(out.str().rfind("t,S,D,S_stderr,D_stderr\n", 0) == 0);
}
