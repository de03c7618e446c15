#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "boltzgrad/vec.hpp"

namespace boltzgrad {

using Rng = std::mt19937_64;

/// Stage tags name independent purposes (sampling, dynamics, estimation...)
/// so that changing one stage's draw count never shifts another's stream.
constexpr std::uint64_t stage_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Counter-based stream derivation: the engine for (master, stage, index) is a
/// pure function of the triple. Each coordinate is mixed through splitmix64
/// and the four resulting words seed the engine through std::seed_seq.
Rng make_stream(std::uint64_t master, std::uint64_t stage, std::uint64_t index);

/// Child stream for sharded work inside a call that was handed an engine.
Rng split_stream(Rng& parent, std::uint64_t index);

double uniform01(Rng& rng);
Vec gaussian_vec(Rng& rng, int dim, double sigma);
Vec unit_vector(Rng& rng, int dim);
Vec uniform_in_ball(Rng& rng, int dim, double radius);
Vec uniform_position(Rng& rng, int dim);

/// Surface area of the unit sphere S^{d-1}.
double sphere_area(int dim);
/// Volume of the unit ball in R^d.
double ball_volume(int dim);

}  // namespace boltzgrad
