#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "boltzgrad/badsets.hpp"
#include "boltzgrad/density.hpp"
#include "boltzgrad/error.hpp"
#include "boltzgrad/trees.hpp"

using namespace boltzgrad;

namespace {

std::vector<ParticleState> one_particle() { return {{Vec{0.5, 0.5, 0}, Vec{0.3, -0.2, 0}}}; }

}  // namespace

TEST_CASE("tree counts equal the rising factorial") {
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s <= 5; ++s) {
      auto trees = enumerate_trees(n, s);
      std::size_t expected = 1;
      for (int k = 0; k < s; ++k) expected *= static_cast<std::size_t>(n + k);
      CHECK(trees.size() == expected);
      CHECK(tree_count(n, s) == expected);
      std::set<std::vector<int>> distinct;
      for (const auto& t : trees) {
        for (int k = 0; k < s; ++k) {
          CHECK(t.a[k] >= 1);
          CHECK(t.a[k] <= n + k);
        }
        distinct.insert(t.a);
      }
      CHECK(distinct.size() == expected);
      CHECK(std::is_sorted(trees.begin(), trees.end(),
                           [](const auto& x, const auto& y) { return x.a < y.a; }));
    }
  auto two = enumerate_trees(1, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].a == std::vector<int>{1, 1});
  CHECK(two[1].a == std::vector<int>{1, 2});
  CHECK(enumerate_trees(2, 2).size() == 6);
  CHECK_THROWS_AS(enumerate_trees(10, 8), Error);
}

TEST_CASE("s = 0 is backward free transport") {
  auto Z = one_particle();
  auto r = build_pseudo_trajectory({1, 0, {}}, Z, 0.5, {}, {});
  CHECK(r.classification == Classification::Good);
  CHECK(r.weight == 1.0);
  CHECK(r.Z[0].x[0] == doctest::Approx(0.35));
  CHECK(r.Z[0].x[1] == doctest::Approx(0.6));
}

TEST_CASE("head-on post-collisional adjunction swaps velocities") {
  std::vector<ParticleState> Z{{Vec{0.5, 0.5, 0}, Vec{1, 0, 0}}};
  TreeParameters p{{0.1}, {Vec{-1, 0, 0}}, {Vec{-1, 0, 0}}};
  auto r = build_pseudo_trajectory({1, 1, {1}}, Z, 0.2, p, {});
  // (v2 - v1) . nu = 2 > 0: scattered to pre-collisional velocities
  CHECK(r.weight == doctest::Approx(2.0));
  auto [a, b] = scatter(Vec{1, 0, 0}, Vec{-1, 0, 0}, Vec{-1, 0, 0});
  CHECK(r.Z[0].v == a);
  CHECK(r.Z[1].v == b);
  CHECK(r.Z[0].v[0] == doctest::Approx(-1.0));
}

TEST_CASE("pre-collisional adjunction: variants differ by at most eps in position") {
  std::vector<ParticleState> Z{{Vec{0.5, 0.5, 0}, Vec{0.2, 0, 0}}};
  TreeParameters p{{0.1}, {Vec{0, 1, 0}}, {Vec{0.1, -0.5, 0}}};
  const double eps = 0.01;
  auto b = build_pseudo_trajectory({1, 1, {1}}, Z, 0.3, p, {Variant::Boltzmann, 0, 2, 0});
  auto h = build_pseudo_trajectory({1, 1, {1}}, Z, 0.3, p, {Variant::BBGKY, eps, 2, 0});
  CHECK(b.weight < 0);
  REQUIRE(h.classification == Classification::Good);
  for (int k = 0; k < 2; ++k) {
    CHECK(torus_distance(b.Z[k].x, h.Z[k].x) <= eps + 1e-12);
    CHECK(b.Z[k].v == h.Z[k].v);
  }
}

TEST_CASE("Boltzmann and BBGKY couple for Good samples") {
  auto Z = one_particle();
  Rng g = make_stream(1, stage_tag("test-trees"), 0);
  auto trees = enumerate_trees(1, 3);
  const double eps = 0.005;
  int good = 0;
  for (int k = 0; k < 600; ++k) {
    TreeParameters p;
    sample_tree_parameters(3, 0.2, 2, 0.5, g, p);
    const auto& tree = trees[k % trees.size()];
    auto b = build_pseudo_trajectory(tree, Z, 0.2, p, {Variant::Boltzmann, 0, 2, 0});
    CHECK(b.classification == Classification::Good);
    auto h = build_pseudo_trajectory(tree, Z, 0.2, p, {Variant::BBGKY, eps, 2, 0});
    if (h.classification != Classification::Good) continue;
    ++good;
    for (std::size_t q = 0; q < b.Z.size(); ++q) {
      CHECK(torus_distance(b.Z[q].x, h.Z[q].x) <= 4 * eps + 1e-9);
      CHECK(b.Z[q].v == h.Z[q].v);
    }
  }
  CHECK(good > 500);
}

TEST_CASE("Good BBGKY trajectories lie in B+ but not B-") {
  auto Z = one_particle();
  Rng g = make_stream(2, stage_tag("test-trees"), 0);
  auto trees = enumerate_trees(1, 2);
  const double eps = 0.01, t = 0.5;
  int good = 0;
  for (int k = 0; k < 600; ++k) {
    TreeParameters p;
    sample_tree_parameters(2, t, 2, 0.5, g, p);
    auto r = build_pseudo_trajectory(trees[k % 2], Z, t, p, {Variant::BBGKY, eps, 2, t});
    if (r.classification != Classification::Good) continue;
    ++good;
    auto a = classify_admissible(r.Z, 1, t, eps, 2);
    CHECK(a.in_vplus);
    CHECK(a.in_plus);
    CHECK_FALSE(a.in_minus);
  }
  CHECK(good > 400);
}

TEST_CASE("classify_admissible trivial cases") {
  auto Z = one_particle();
  CHECK(classify_admissible(Z, 1, 1.0, 0.01).in_vplus);
  std::vector<ParticleState> still{{Vec{0.2, 0.2, 0}, Vec{}}, {Vec{0.7, 0.7, 0}, Vec{}}};
  CHECK_FALSE(classify_admissible(still, 1, 1.0, 0.01).in_vplus);
}

TEST_CASE("Boltzmann recollision rate is exactly zero; BBGKY decreases with eps") {
  auto Z = one_particle();
  SeriesOptions o;
  o.samples = 20000;
  Rng g = make_stream(3, stage_tag("test-trees"), 0);
  CHECK(recollision_rate(1, 2, 0.5, Z, o, g) == 0.0);
  o.variant = Variant::BBGKY;
  double prev = 1.0;
  for (double eps : {0.02, 0.01, 0.005}) {
    o.eps = eps;
    Rng h = make_stream(3, stage_tag("test-trees"), 1);
    double r = recollision_rate(1, 2, 0.5, Z, o, h);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("s = 0 term is f0 along free flight, exactly") {
  auto f0 = DensitySpec::two_bump(2, 1.0).with_cosine_profile(0.5);
  auto Z = one_particle();
  Rng g = make_stream(4, 0, 0);
  auto e = evaluate_series_term(1, 0, 0.5, f0, Z, {}, g);
  Vec x = wrap_position(Z[0].x - 0.5 * Z[0].v);
  CHECK(e.estimate == doctest::Approx(f0(x, Z[0].v)));
  CHECK(e.stderr == 0.0);
}

TEST_CASE("equilibrium terms vanish and terms scale like t^s") {
  auto M = DensitySpec::maxwellian(2, 1.0);
  auto f0 = DensitySpec::two_bump(2, 1.0);
  std::vector<ParticleState> Z{{Vec{0.5, 0.5, 0}, Vec{0.9375, 0, 0}}};
  SeriesOptions o;
  o.samples = 20000;
  SeriesOptions plain = o;
  plain.antithetic = false;
  for (int s = 1; s <= 2; ++s) {
    Rng g = make_stream(5, stage_tag("test-trees"), s);
    auto e = evaluate_series_term(1, s, 0.01, M, Z, plain, g);
    CHECK(e.stderr > 0);
    CHECK(std::abs(e.estimate) <= 3 * e.stderr);
    // sign-flip averaging cancels each draw up to round-off
    Rng h = make_stream(5, stage_tag("test-trees"), 10 + s);
    CHECK(std::abs(evaluate_series_term(1, s, 0.01, M, Z, o, h).estimate) < 1e-15);
  }
  Rng a = make_stream(6, stage_tag("test-trees"), 0), b = make_stream(6, stage_tag("test-trees"), 1);
  auto e1 = evaluate_series_term(1, 1, 0.01, f0, Z, o, a);
  auto e2 = evaluate_series_term(1, 1, 0.04, f0, Z, o, b);
  CHECK(std::log(std::abs(e2.estimate / e1.estimate)) / std::log(4.0) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("BBGKY prefactor") {
  // prod_{k<s} (N - n - k) eps^{d-1}
  CHECK(bbgky_prefactor(100, 1, 2, 0.01, 2) == doctest::Approx(99 * 98 * 1e-4));
  CHECK(bbgky_prefactor(100, 1, 0, 0.01, 2) == 1.0);
}

TEST_CASE("series CSV schema") {
  std::ostringstream out;
  write_series_csv_header(out);
  write_series_csv_row(out, 1, 2, 0.5, "boltzmann", {});
  CHECK(out.str().rfind("n,s,t,variant,estimate,stderr,recollision_fraction,samples\n1,2,0.5,boltzmann,", 0) == 0);
}
