#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/rng.hpp"

namespace boltzgrad {

enum class Sign { Plus, Minus };

const char* to_string(Sign s);

struct BadSetSpec {
  std::size_t n = 2;
  double eps0 = 0.01;
  double R = 2.0;
  double T = 0.5;
  Sign sign = Sign::Minus;
  int dim = 2;
};

struct MeasureEstimate {
  double fraction = 0.0;
  double stderr = 0.0;  ///< sqrt(p(1-p)/samples)
  std::size_t samples = 0;
  BadSetSpec spec;
};

/// Closed-form test: does |r + u w + k| <= eps0 for some u in [0, T] and some
/// integer image k? Distances within kContactTolerance of eps0 count as inside.
bool pair_in_bad_set(const Vec& r, const Vec& w, double eps0, double T);

/// True iff some pair comes within eps0 under the forward (Plus) or backward
/// (Minus) free flow on [0, T]. Throws VelocityOutOfRange if some |v| > R.
bool in_bad_set(const std::vector<ParticleState>& Z, const BadSetSpec& spec);

/// Uniform configuration on (T^d x B_R)^n.
std::vector<ParticleState> sample_uniform_configuration(const BadSetSpec& spec, Rng& rng);

MeasureEstimate estimate_measure(const BadSetSpec& spec, std::size_t samples, Rng& rng);

/// One sample set shared across eps0 values (common random numbers), so the
/// estimated fractions are monotone whenever membership is.
std::vector<MeasureEstimate> estimate_measure_sweep(const BadSetSpec& base,
                                                    const std::vector<double>& eps0_list,
                                                    std::size_t samples, Rng& rng);

/// Fraction of uniform samples lying in both B^+ and B^-.
MeasureEstimate estimate_intersection(const BadSetSpec& spec, std::size_t samples, Rng& rng);

struct MonotonicityResult {
  bool pass = true;
  std::vector<MeasureEstimate> estimates;
};

/// Fractions (independent samples per eps0) nondecreasing within 3 stderr.
MonotonicityResult monotonicity_check(const std::vector<double>& eps0_list,
                                      const BadSetSpec& base, std::size_t samples, Rng& rng);

struct RecollisionEstimate {
  MeasureEstimate recollision;  ///< backward hard-sphere flow has an event (or overlap)
  MeasureEstimate bad;          ///< recollision, or leaves G(eps0/2) on [delta, t]
};

/// Adjoin particle k+1 at x_m + eps nu with (nu, v) uniform on S^{d-1} x B_R,
/// scattering when post-collisional, and flow the k+1 particles backward for
/// time t. Throws BadBaseConfiguration unless Z_k lies outside B^{k-}_{eps0}
/// (horizon t).
RecollisionEstimate estimate_recollision_probability(const std::vector<ParticleState>& Z_k,
                                                     std::size_t m, double eps, double eps0,
                                                     double delta, double R, double t,
                                                     std::size_t samples, Rng& rng, int dim = 2);

void write_measure_csv_header(std::ostream& out);
void write_measure_csv_row(std::ostream& out, const MeasureEstimate& e);

}  // namespace boltzgrad
