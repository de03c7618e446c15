#pragma once

#include <string>
#include <vector>

#include "boltzgrad/collision_operator.hpp"
#include "boltzgrad/density.hpp"
#include "boltzgrad/experiments/config.hpp"
#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/observables.hpp"
#include "boltzgrad/rng.hpp"
#include "boltzgrad/velocity_grid.hpp"

namespace boltzgrad::experiments {

DensitySpec make_density(const ExperimentConfig& c);
VelocityGrid make_grid(const ExperimentConfig& c);
CollisionOptions make_collision(const ExperimentConfig& c);
Rng stream(const ExperimentConfig& c, const char* stage, std::uint64_t index = 0);

/// eps with N eps^{d-1} = N_eps.
double scaled_eps(double N, double N_eps, int dim);

/// Factorized replicas, replica r drawn from stream(stage, r).
Ensemble sample_ensemble(const ExperimentConfig& c, const DensitySpec& f0, std::size_t N,
                         double eps, std::size_t replicas, const char* stage);

/// Forward hard-sphere flow of every replica by t.
Ensemble evolve(const Ensemble& e, double t);

/// Nodal density from the velocities of all particles, using the grid cells
/// as histogram bins, mixed as (1 - mix) hist + mix M_beta.
std::vector<double> histogram_density(const Ensemble& e, const VelocityGrid& grid, double mix,
                                      double beta);

/// Histogram entropy -sum w f log f of the same binning (mix = 0).
double histogram_grid_entropy(const Ensemble& e, const VelocityGrid& grid);

struct CoarseDensity {
  int bins = 8;
  std::vector<Vec> centers;
  std::vector<double> value;
  std::vector<double> stderr;
};

/// Velocity density (positions integrated) on bins^d cells over
/// [-v_cut, v_cut]^d, replica-level standard errors.
CoarseDensity coarse_particle_density(const Ensemble& e, int bins, double v_cut, int dim);

/// Cell averages of nodal values; requires grid.n to be a multiple of bins.
CoarseDensity coarse_grid_density(const VelocityGrid& grid, const std::vector<double>& f, int bins);

std::string fmt_double(double x);

}  // namespace boltzgrad::experiments
