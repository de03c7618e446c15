#pragma once

#include <cstddef>
#include <vector>

#include "boltzgrad/density.hpp"
#include "boltzgrad/rng.hpp"
#include "boltzgrad/stats.hpp"
#include "boltzgrad/torus.hpp"

namespace boltzgrad {

struct DsmcOptions {
  int dim = 2;
  int cells_per_axis = 8;
  double dt = 0.01;
  double t_final = 1.0;
  /// Multiplies the collision kernel; 1 reproduces Q with unit prefactor.
  double collision_scale = 1.0;
  std::size_t snapshot_every = 10;  ///< steps between snapshots (t = 0 always kept)
  double initial_majorant = 0.0;    ///< per-cell max relative speed; 0 = from the data
};

struct DsmcSnapshot {
  double t = 0.0;
  std::vector<ParticleState> particles;
};

struct DsmcState {
  std::vector<ParticleState> particles;
  std::vector<double> majorant;  ///< per cell
  double t = 0.0;
  std::size_t collisions = 0;
  std::size_t candidates = 0;
  std::size_t majorant_doublings = 0;
};

struct DsmcResult {
  DsmcState final;
  std::vector<DsmcSnapshot> snapshots;
};

/// Initial particles iid from f0 (positions from the spatial profile).
std::vector<ParticleState> dsmc_initial(const DensitySpec& f0, std::size_t count, Rng& rng);

/// Alternates exact free transport with per-cell majorant-frequency pair
/// collisions. A candidate pair whose relative speed exceeds the cell
/// majorant doubles it (logged) and is still tested against the new value.
DsmcResult dsmc_run(std::vector<ParticleState> initial, const DsmcOptions& options, Rng& rng);

/// Direction nu with density proportional to (w_hat . nu)_+ on S^{d-1}.
Vec sample_collision_direction(const Vec& w_hat, int dim, Rng& rng);

/// Chi-square of per-axis velocity histograms (bins on [-R, R]^d, product
/// cells) against the Maxwellian with inverse temperature beta and mean u.
ChiSquareResult velocity_chi_square(const std::vector<ParticleState>& particles, int dim,
                                    double beta, const Vec& mean, int bins, double R);

/// -sum p log(p / cell volume) of the velocity histogram on [-R, R]^d.
double histogram_entropy(const std::vector<ParticleState>& particles, int dim, int bins, double R);

/// Inverse temperature (d N / sum |v - u|^2) and mean velocity of a particle set.
std::pair<double, Vec> moment_matched_beta(const std::vector<ParticleState>& particles, int dim);

}  // namespace boltzgrad
