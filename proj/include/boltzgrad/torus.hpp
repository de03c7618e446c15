#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "boltzgrad/vec.hpp"

namespace boltzgrad {

inline constexpr double kContactTolerance = 1e-12;
inline constexpr double kOverlapTolerance = 1e-9;
inline constexpr double kUnitNormTolerance = 1e-9;

struct ParticleState {
  Vec x;  ///< position in [0,1)^d
  Vec v;
};

/// Contact time and impact direction; `nu` points from the first particle
/// toward the second at contact.
struct ContactResult {
  std::optional<double> time;
  Vec nu;
};

/// Reduce each coordinate into [0,1).
Vec wrap_position(Vec x);

/// Representative of a-b modulo 1 with coordinates in [-1/2, 1/2).
Vec minimal_image(const Vec& a, const Vec& b);

double torus_distance(const Vec& a, const Vec& b);

ParticleState free_flight(const ParticleState& z, double t);

/// Visit integer image offsets k such that the segment p + u*w, u in [0, u_max],
/// can come within `radius` of -k. The segment is cut into pieces whose extent
/// is at most 1/2 per axis, so the visited set stays O(|w| u_max) instead of the
/// full cube of side |w| u_max. The callback receives (k, u_lo, u_hi) for each
/// piece and returns true to stop. Pieces are visited in increasing u.
template <class F>
void for_each_segment_image(const Vec& p, const Vec& w, double u_max, double radius, F&& visit) {
  double wmax = std::max({std::abs(w[0]), std::abs(w[1]), std::abs(w[2])});
  int pieces = 1;
  if (wmax * u_max > 0.5) pieces = static_cast<int>(std::ceil(wmax * u_max / 0.5));
  const double du = u_max / pieces;
  for (int piece = 0; piece < pieces; ++piece) {
    double u0 = piece * du;
    double u1 = (piece + 1 == pieces) ? u_max : (piece + 1) * du;
    int lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      double e0 = p[a] + u0 * w[a];
      double e1 = p[a] + u1 * w[a];
      lo[a] = static_cast<int>(std::ceil(-std::max(e0, e1) - radius));
      hi[a] = static_cast<int>(std::floor(-std::min(e0, e1) + radius));
    }
    for (int k0 = lo[0]; k0 <= hi[0]; ++k0)
      for (int k1 = lo[1]; k1 <= hi[1]; ++k1)
        for (int k2 = lo[2]; k2 <= hi[2]; ++k2)
          if (visit(Vec{double(k0), double(k1), double(k2)}, u0, u1)) return;
  }
}

/// Smallest t in [0, t_max] at which the torus distance between the two
/// particles reaches eps with approaching relative motion. A pair that is
/// already in contact (within kOverlapTolerance) and approaching reports t = 0.
/// Throws InitialOverlap if the current distance is below eps - kOverlapTolerance.
ContactResult pair_collision_time(const ParticleState& z1, const ParticleState& z2, double eps,
                                  double t_max);

/// Reference implementation enumerating the full image cube
/// k in {-K..K}^d, K = ceil(|dv| t_max + 1). Slow; used to cross-check.
ContactResult pair_collision_time_full_shell(const ParticleState& z1, const ParticleState& z2,
                                             double eps, double t_max, int dim);

/// Elastic scattering: v_i' = v_i - [(v_i-v_j).nu] nu, v_j' = v_j + [(v_i-v_j).nu] nu.
std::pair<Vec, Vec> scatter(const Vec& vi, const Vec& vj, const Vec& nu);

}  // namespace boltzgrad
