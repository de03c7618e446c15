#include <doctest.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/density.hpp"
#include "boltzgrad/error.hpp"
#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/initial_data.hpp"

using namespace boltzgrad;

namespace {

Configuration twenty(std::uint64_t seed) {
  Rng g = make_stream(seed, stage_tag("test-hs"), 0);
  return sample_factorized(DensitySpec::maxwellian(2, 1.0), 20, 0.05, g);
}

double max_coordinate_error(const Configuration& a, const Configuration& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.particles.size(); ++k) {
    Vec d = minimal_image(a.particles[k].x, b.particles[k].x);
    for (int c = 0; c < a.dim; ++c) e = std::max(e, std::abs(d[c]));
  }
  return e;
}

}  // namespace

TEST_CASE("single particle moves freely") {
  Configuration c;
  c.eps = 0.1;
  c.particles = {{Vec{0.1, 0.2, 0}, Vec{0.3, -0.7, 0}}};
  auto r = simulate(c, 1.0);
  CHECK(r.log.events.empty());
  CHECK(r.final.particles[0].x[0] == doctest::Approx(0.4));
  CHECK(r.final.particles[0].x[1] == doctest::Approx(0.5));
  auto back = flow_backward(r.final, 1.0);
  CHECK(back.particles[0].x[0] == doctest::Approx(0.1));
}

TEST_CASE("head-on pair: one event, velocities swap") {
  Configuration c;
  c.eps = 0.1;
  c.particles = {{Vec{0.25, 0.5, 0}, Vec{1, 0, 0}}, {Vec{0.75, 0.5, 0}, Vec{-1, 0, 0}}};
  auto r = simulate(c, 0.5);
  REQUIRE(r.log.events.size() == 1);
  CHECK(r.log.events[0].time == doctest::Approx(0.2));
  CHECK(r.final.particles[0].v[0] == doctest::Approx(-1.0));
  CHECK(r.final.particles[1].v[0] == doctest::Approx(1.0));
  // backward past the collision restores the pre-collision state
  auto back = flow_backward(r.final, 0.5);
  CHECK(back.particles[0].v[0] == doctest::Approx(1.0));
  CHECK(back.particles[0].x[0] == doctest::Approx(0.25));
}

TEST_CASE("conservation over many events") {
  auto c = twenty(1);
  SimulationOptions o;
  o.stop_after_events = 1000;
  auto r = simulate(c, 1e6, o);
  CHECK(r.log.events.size() == 1000);
  Vec p0 = total_momentum(c.particles), p1 = total_momentum(r.final.particles);
  const double e0 = total_energy(c.particles), e1 = total_energy(r.final.particles);
  const double scale = std::sqrt(e0);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(p1[k] - p0[k]) <= 1e-10 * scale);
  CHECK(std::abs(e1 - e0) <= 1e-10 * e0);
}

TEST_CASE("exclusion holds at probe times") {
  auto c = twenty(2);
  for (int k = 1; k <= 100; ++k) {
    auto r = simulate(c, 0.01 * k);
    CHECK(min_pair_distance(r.final.particles) >= c.eps - 1e-9);
  }
}

TEST_CASE("reverse velocities twice is the identity") {
  auto c = twenty(3);
  auto r = reverse_velocities(reverse_velocities(c));
  for (std::size_t k = 0; k < c.particles.size(); ++k) CHECK(r.particles[k].v == c.particles[k].v);
  Configuration one;
  one.particles = {{Vec{}, Vec{1, 2, 0}}};
  CHECK(reverse_velocities(one).particles[0].v == Vec{-1, -2, 0});
}

TEST_CASE("reversal round trip returns the initial positions") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    auto c = twenty(seed);
    // error grows by about 10x per few events; tau = 0.5 keeps ~18 events
    auto mid = simulate(c, 0.5);
    auto back = reverse_velocities(simulate(reverse_velocities(mid.final), 0.5).final);
    CHECK(max_coordinate_error(back, c) < 1e-6);
    CHECK(max_coordinate_error(flow_backward(mid.final, 0.5), c) < 1e-6);
  }
}

TEST_CASE("identical input gives an identical event log") {
  auto c = twenty(4);
  auto a = simulate(c, 1.0), b = simulate(c, 1.0);
  std::ostringstream sa, sb;
  write_event_log_csv(sa, a.log, 2);
  write_event_log_csv(sb, b.log, 2);
  CHECK(sa.str() == sb.str());
  CHECK(!a.log.events.empty());
}

TEST_CASE("overlapping configuration is rejected") {
  Configuration c;
  c.eps = 0.1;
  c.particles = {{Vec{0.5, 0.5, 0}, Vec{}}, {Vec{0.55, 0.5, 0}, Vec{}}};
  CHECK_THROWS_AS(check_exclusion(c), Error);
  CHECK_THROWS_AS(simulate(c, 1.0), Error);
}

TEST_CASE("configuration JSON round trip") {
  auto c = twenty(5);
  auto j = configuration_to_json(c);
  auto d = configuration_from_json(j, c.eps, c.dim);
  REQUIRE(d.particles.size() == c.particles.size());
  for (std::size_t k = 0; k < c.particles.size(); ++k) {
    CHECK(d.particles[k].x == c.particles[k].x);
    CHECK(d.particles[k].v == c.particles[k].v);
  }
}
