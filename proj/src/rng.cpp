#include "boltzgrad/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace boltzgrad {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t master, std::uint64_t stage, std::uint64_t index) {
  std::uint64_t a = splitmix64(master);
  std::uint64_t b = splitmix64(a ^ stage);
  std::uint64_t c = splitmix64(b ^ splitmix64(index));
  std::uint64_t d = splitmix64(c);
  std::array<std::uint32_t, 8> words{};
  for (int k = 0; k < 2; ++k) {
    words[k] = static_cast<std::uint32_t>(a >> (32 * k));
    words[2 + k] = static_cast<std::uint32_t>(b >> (32 * k));
    words[4 + k] = static_cast<std::uint32_t>(c >> (32 * k));
    words[6 + k] = static_cast<std::uint32_t>(d >> (32 * k));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

Rng split_stream(Rng& parent, std::uint64_t index) {
  std::uint64_t base = parent();
  return make_stream(base, stage_tag("split"), index);
}

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

Vec gaussian_vec(Rng& rng, int dim, double sigma) {
  std::normal_distribution<double> g(0.0, sigma);
  Vec v;
  for (int k = 0; k < dim; ++k) v[k] = g(rng);
  return v;
}

Vec unit_vector(Rng& rng, int dim) {
  for (;;) {
    Vec v = gaussian_vec(rng, dim, 1.0);
    double n = norm(v);
    if (n > 1e-12) return v / n;
  }
}

Vec uniform_in_ball(Rng& rng, int dim, double radius) {
  Vec dir = unit_vector(rng, dim);
  double r = radius * std::pow(uniform01(rng), 1.0 / dim);
  return r * dir;
}

Vec uniform_position(Rng& rng, int dim) {
  Vec x;
  for (int k = 0; k < dim; ++k) x[k] = uniform01(rng);
  return x;
}

double sphere_area(int dim) {
  return dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

double ball_volume(int dim) {
  return dim == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
}

}  // namespace boltzgrad
