#include <doctest.h>

#include <cmath>

#include "boltzgrad/density.hpp"
#include "boltzgrad/error.hpp"
#include "boltzgrad/initial_data.hpp"
#include "boltzgrad/stats.hpp"

using namespace boltzgrad;

TEST_CASE("Maxwellian second moment") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  Rng g = make_stream(1, stage_tag("test-init"), 0);
  RunningStats st;
  for (int k = 0; k < 100000; ++k) st.add(norm2(sample_velocity(f0, g)));
  CHECK(std::abs(st.mean - 2.0) < 3.0 * st.stderr_mean());
}

TEST_CASE("two-bump density respects its envelope and is normalized") {
  for (int d : {2, 3}) {
    auto f0 = DensitySpec::two_bump(d, 1.0, 1.0);
    CHECK(envelope_probe(f0, 6.0, d == 2 ? 161 : 41) <= 1.0 + 1e-12);
    // tensor midpoint rule on [-8, 8]^d
    const int n = d == 2 ? 200 : 60;
    const double h = 16.0 / n;
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < (d == 3 ? n : 1); ++k) {
          Vec v{-8 + (i + 0.5) * h, -8 + (j + 0.5) * h, d == 3 ? -8 + (k + 0.5) * h : 0.0};
          mass += f0.velocity_density(v);
        }
    CHECK(mass * std::pow(h, d) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("envelope violation is reported") {
  auto bad = DensitySpec::custom(2, 1.0, 5.0, [](const Vec& v) { return maxwellian(v, 2, 1.0); });
  Rng g = make_stream(1, 2, 3);
  CHECK_THROWS_AS(sample_velocity(bad, g), Error);
}

TEST_CASE("factorized samples respect exclusion") {
  auto f0 = DensitySpec::two_bump(2, 1.0);
  Rng g = make_stream(2, stage_tag("test-init"), 0);
  for (int r = 0; r < 20; ++r) {
    auto c = sample_factorized(f0, 64, 1.0 / 64, g);
    CHECK(c.particles.size() == 64);
    CHECK(min_pair_distance(c.particles) > c.eps);
  }
  auto one = sample_factorized(f0, 1, 0.5, g);
  CHECK(one.particles.size() == 1);
}

TEST_CASE("two-particle acceptance matches the excluded disk") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  Rng g = make_stream(3, stage_tag("test-init"), 0);
  auto e = estimate_partition_function(f0, 2, 0.1, 100000, g);
  const double exact = 1.0 - M_PI * 0.01;
  CHECK(std::abs(e.estimate - exact) < 3.0 * e.stderr);
  Rng h = make_stream(3, stage_tag("test-init"), 1);
  CHECK(estimate_partition_function(f0, 1, 0.1, 100, h).estimate == 1.0);
}

TEST_CASE("Markov chain and rejection samplers agree on the pair distance distribution") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  const std::size_t N = 8;
  const double eps = 0.15;
  auto histogram = [&](SamplerMethod m, std::uint64_t stage) {
    Rng g = make_stream(4, stage, 0);
    FactorizedOptions o;
    o.method = m;
    std::vector<double> h(5, 0.0);
    for (int r = 0; r < 4000; ++r) {
      auto c = sample_factorized(f0, N, eps, g, o);
      double d = torus_distance(c.particles[0].x, c.particles[1].x);
      h[std::min(4, static_cast<int>((d - eps) / 0.1))] += 1.0;
    }
    return h;
  };
  auto a = histogram(SamplerMethod::GlobalRejection, 1);
  auto b = histogram(SamplerMethod::MarkovChain, 2);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double pa = a[k] / 4000, pb = b[k] / 4000;
    double se = std::sqrt(pa * (1 - pa) / 4000 + pb * (1 - pb) / 4000);
    CHECK(std::abs(pa - pb) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("activity and grand-canonical particle count") {
  CHECK(activity(0.02, 2) == doctest::Approx(50.0));
  CHECK(activity(0.1, 3) == doctest::Approx(100.0));
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  Rng g = make_stream(5, stage_tag("test-init"), 0);
  RunningStats n;
  for (int r = 0; r < 400; ++r) n.add(static_cast<double>(sample_grand_canonical(f0, 0.02, {}, g).n));
  // exclusion lowers the accepted count only slightly below mu = 50
  CHECK(n.mean < 50.0 + 3.0 * n.stderr_mean());
  CHECK(n.mean > 40.0);
}

TEST_CASE("conditioned samples are collision free on [0, delta]") {
  auto f0 = DensitySpec::two_bump(2, 1.0);
  Rng g = make_stream(6, stage_tag("test-init"), 0);
  for (int r = 0; r < 50; ++r) {
    auto s = sample_grand_canonical(f0, 0.05, ConditioningSpec{0.05}, g);
    CHECK(simulate(s.config, 0.05).log.events.empty());
    auto c = sample_conditioned_factorized(f0, 20, 0.05, ConditioningSpec{0.05}, g);
    CHECK(collision_free(c.particles, 0.05, 0.05));
  }
}

TEST_CASE("velocity marginal of the factorized sampler is f0") {
  auto f0 = DensitySpec::maxwellian(2, 1.0);
  Rng g = make_stream(7, stage_tag("test-init"), 0);
  std::vector<double> counts(6, 0.0), probs(6);
  const double edges[7] = {-INFINITY, -1.5, -0.5, 0.0, 0.5, 1.5, INFINITY};
  for (int k = 0; k < 6; ++k) probs[k] = gaussian_interval_probability(edges[k], edges[k + 1], 0, 1);
  double total = 0.0;
  for (int r = 0; r < 300; ++r) {
    auto c = sample_factorized(f0, 32, 1.0 / 32, g);
    for (const auto& z : c.particles) {
      int k = 0;
      while (z.v[0] >= edges[k + 1]) ++k;
      counts[k] += 1.0;
      total += 1.0;
    }
  }
  CHECK(chi_square_test(counts, probs, total).p_value > 0.01);
}
