#include <doctest.h>

#include <cmath>

#include "boltzgrad/error.hpp"
#include "boltzgrad/rng.hpp"
#include "boltzgrad/stats.hpp"
#include "boltzgrad/torus.hpp"

using namespace boltzgrad;

namespace {

// First time on a uniform grid of step h at which the torus distance drops to eps
// while approaching, refined by bisection.
std::optional<double> dense_grid_contact(const ParticleState& a, const ParticleState& b, double eps,
                                         double t_max, double h) {
  auto dist = [&](double t) {
    return torus_distance(free_flight(a, t).x, free_flight(b, t).x);
  };
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

ParticleState random_state(Rng& g, int dim) {
  return {uniform_position(g, dim), gaussian_vec(g, dim, 1.0)};
}

}  // namespace

TEST_CASE("minimal image lies in [-1/2, 1/2)") {
  Rng g = make_stream(1, stage_tag("test-torus"), 0);
  for (int k = 0; k < 1000; ++k) {
    Vec a = uniform_position(g, 3), b = uniform_position(g, 3);
    Vec m = minimal_image(a, b);
    for (int c = 0; c < 3; ++c) {
      CHECK(m[c] >= -0.5);
      CHECK(m[c] < 0.5);
    }
    CHECK(torus_distance(a, b) == doctest::Approx(norm(m)));
  }
  CHECK(torus_distance(Vec{0.05, 0.5, 0}, Vec{0.95, 0.5, 0}) == doctest::Approx(0.1));
}

TEST_CASE("wrap_position maps into the unit cube") {
  Vec w = wrap_position(Vec{1.25, -0.25, 3.0});
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.75));
  CHECK(w[2] == doctest::Approx(0.0));
}

TEST_CASE("head-on pair meets at the expected time") {
  ParticleState a{Vec{0.3, 0.5, 0}, Vec{1, 0, 0}};
  ParticleState b{Vec{0.7, 0.5, 0}, Vec{-1, 0, 0}};
  auto r = pair_collision_time(a, b, 0.1, 1.0);
  REQUIRE(r.time);
  CHECK(*r.time == doctest::Approx(0.15));
  CHECK(r.nu[0] == doctest::Approx(1.0));
}

TEST_CASE("contact across the periodic boundary") {
  ParticleState a{Vec{0.95, 0.5, 0}, Vec{1, 0, 0}};
  ParticleState b{Vec{0.15, 0.5, 0}, Vec{0, 0, 0}};
  auto r = pair_collision_time(a, b, 0.1, 1.0);
  REQUIRE(r.time);
  CHECK(*r.time == doctest::Approx(0.1));
}

TEST_CASE("overlapping initial pair is rejected") {
  ParticleState a{Vec{0.5, 0.5, 0}, Vec{}};
  ParticleState b{Vec{0.52, 0.5, 0}, Vec{}};
  CHECK_THROWS_AS(pair_collision_time(a, b, 0.1, 1.0), Error);
}

TEST_CASE("closed-form contact time agrees with the dense-grid oracle") {
  for (int dim : {2, 3}) {
    Rng g = make_stream(2, stage_tag("test-contact"), dim);
    const double eps = 0.05, t_max = 1.0;
    int hits = 0;
    for (int k = 0; k < 500; ++k) {
      ParticleState a = random_state(g, dim), b = random_state(g, dim);
      if (torus_distance(a.x, b.x) < eps + 1e-6) continue;
      auto closed = pair_collision_time(a, b, eps, t_max);
      auto oracle = dense_grid_contact(a, b, eps, t_max, 2e-4);
      REQUIRE(closed.time.has_value() == oracle.has_value());
      if (oracle) {
        ++hits;
        CHECK(std::abs(*closed.time - *oracle) < 1e-3);
      }
    }
    CHECK(hits > 5);
  }
}

TEST_CASE("segment-image search matches the full image cube") {
  Rng g = make_stream(3, stage_tag("test-shell"), 0);
  for (int k = 0; k < 2000; ++k) {
    ParticleState a = random_state(g, 2), b = random_state(g, 2);
    a.v = 4.0 * a.v;
    if (torus_distance(a.x, b.x) < 0.03) continue;
    auto fast = pair_collision_time(a, b, 0.02, 2.0);
    auto slow = pair_collision_time_full_shell(a, b, 0.02, 2.0, 2);
    REQUIRE(fast.time.has_value() == slow.time.has_value());
    if (fast.time) CHECK(*fast.time == doctest::Approx(*slow.time).epsilon(1e-12));
  }
}

TEST_CASE("scattering conserves momentum and energy and is an involution") {
  Rng g = make_stream(4, stage_tag("test-scatter"), 0);
  for (int k = 0; k < 200; ++k) {
    Vec vi = gaussian_vec(g, 3, 1.0), vj = gaussian_vec(g, 3, 1.0), nu = unit_vector(g, 3);
    auto [a, b] = scatter(vi, vj, nu);
    Vec p = vi + vj, q = a + b;
    for (int c = 0; c < 3; ++c) CHECK(q[c] == doctest::Approx(p[c]));
    CHECK(norm2(a) + norm2(b) == doctest::Approx(norm2(vi) + norm2(vj)));
    auto [a2, b2] = scatter(a, b, nu);
    for (int c = 0; c < 3; ++c) CHECK(a2[c] == doctest::Approx(vi[c]));
  }
  // head-on: velocities swap
  auto [a, b] = scatter(Vec{1, 0, 0}, Vec{-1, 0, 0}, Vec{1, 0, 0});
  CHECK(a[0] == doctest::Approx(-1.0));
  CHECK(b[0] == doctest::Approx(1.0));
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a = make_stream(9, stage_tag("x"), 3), b = make_stream(9, stage_tag("x"), 3);
  Rng c = make_stream(9, stage_tag("x"), 4), d = make_stream(9, stage_tag("y"), 3);
  auto ra = a(), rb = b(), rc = c(), rd = d();
  CHECK(ra == rb);
  CHECK(ra != rc);
  CHECK(ra != rd);
  Rng p = make_stream(1, 2, 3), q = make_stream(1, 2, 3);
  CHECK(split_stream(p, 5)() == split_stream(q, 5)());
}

TEST_CASE("unit vectors are uniform on the circle") {
  Rng g = make_stream(5, stage_tag("test-unit"), 0);
  std::vector<double> counts(8, 0.0), probs(8, 1.0 / 8);
  for (int k = 0; k < 80000; ++k) {
    Vec u = unit_vector(g, 2);
    CHECK(std::abs(norm(u) - 1.0) < 1e-12);
    double th = std::atan2(u[1], u[0]) + M_PI;
    counts[std::min(7, static_cast<int>(th / (2 * M_PI) * 8))] += 1;
  }
  CHECK(chi_square_test(counts, probs, 80000).p_value > 1e-3);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2 * M_PI));
  CHECK(sphere_area(3) == doctest::Approx(4 * M_PI));
  CHECK(ball_volume(2) == doctest::Approx(M_PI));
}

TEST_CASE("log-log slope recovers a power law") {
  std::vector<double> x{0.04, 0.02, 0.01, 0.005}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
}

TEST_CASE("chi-square p-value against the reference distribution") {
  // statistic 3.0 on 2 dof: p = exp(-3/2)
  std::vector<double> counts{40, 30, 30}, probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto r = chi_square_test(counts, probs, 100);
  CHECK(r.statistic == doctest::Approx(2.0));
  CHECK(r.dof == 2);
  CHECK(r.p_value == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("running statistics merge like a single pass") {
  RunningStats a, b, all;
  for (int k = 0; k < 100; ++k) {
    double x = std::sin(k * 0.7);
    (k < 37 ? a : b).add(x);
    all.add(x);
  }
  a.merge(b);
  CHECK(a.n == all.n);
  CHECK(a.mean == doctest::Approx(all.mean));
  CHECK(a.stderr_mean() == doctest::Approx(all.stderr_mean()));
}
