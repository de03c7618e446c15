#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "boltzgrad/velocity_grid.hpp"

namespace boltzgrad {

enum class Quadrature { Tensor, MonteCarlo };

struct CollisionOptions {
  Quadrature quadrature = Quadrature::Tensor;
  /// Tensor: directions on the circle (d=2) or azimuthal directions (d=3).
  int angles = 32;
  int polar_nodes = 8;  ///< d=3 Gauss-Legendre nodes in cos(theta)
  std::size_t mc_samples = 4096;  ///< per node, MonteCarlo only
  std::uint64_t mc_seed = 0;
  Interpolation interpolation = Interpolation::LogQuadratic;
  bool conservation_correction = true;
  /// Drop (gain and loss together) collisions whose outgoing velocities
  /// leave the box; otherwise the gain is taken as 0 there.
  bool truncate_kernel = true;
};

struct AngularRule {
  std::vector<Vec> nu;
  std::vector<double> weight;  ///< sums to |S^{d-1}|
};

AngularRule angular_rule(int dim, const CollisionOptions& options);

/// Q(f,f) at every node: int int [f(v')f(v1') - f(v)f(v1)] ((v1-v).nu)_+ dnu dv1,
/// v1 over the grid nodes, off-grid values through GridInterpolant.
std::vector<double> collision_operator(const VelocityGrid& grid, const std::vector<double>& f,
                                       const CollisionOptions& options = {});

/// Q - m * sum_a lambda_a phi_a with m = |f| and phi in {1, v, |v|^2}, chosen
/// so that sum w phi_b Q = 0 for every b.
std::vector<double> conservation_correct(const VelocityGrid& grid, const std::vector<double>& f,
                                         std::vector<double> Q);

/// Loss frequency sum_j w f_j int ((v_j - v).nu)_+ dnu at each node.
std::vector<double> loss_rate(const VelocityGrid& grid, const std::vector<double>& f,
                              const CollisionOptions& options = {});

/// -sum w Q log f over nodes with f > 0.
double quadrature_dissipation(const VelocityGrid& grid, const std::vector<double>& f,
                              const std::vector<double>& Q);

}  // namespace boltzgrad
