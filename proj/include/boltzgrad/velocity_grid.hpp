#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "boltzgrad/vec.hpp"

namespace boltzgrad {

enum class Interpolation {
  LogQuadratic,  ///< tensor 3-point Lagrange on log f; exact for Gaussians
  Multilinear,
};

/// Cell-centred uniform grid on [-v_cut, v_cut]^d: node k sits at
/// -v_cut + (k + 1/2) h with h = 2 v_cut / n, weight h^d.
struct VelocityGrid {
  int dim = 2;
  int n = 32;
  double v_cut = 5.0;

  /// 32 nodes/axis in d=2, 16 in d=3, v_cut = 5/sqrt(beta).
  static VelocityGrid defaults(int dim, double beta);

  double h() const { return 2.0 * v_cut / n; }
  double weight() const;
  std::size_t size() const;
  double coordinate(int k) const { return -v_cut + (k + 0.5) * h(); }
  Vec node(std::size_t index) const;
  std::vector<Vec> nodes() const;
  double box_volume() const;
};

/// Values of g at the nodes.
std::vector<double> project(const VelocityGrid& grid, const std::function<double(const Vec&)>& g);

/// Off-grid evaluation of nodal values. Outside the box the value is 0.
/// LogQuadratic falls back to multilinear wherever its stencil holds a value
/// at or below `floor`.
class GridInterpolant {
 public:
  GridInterpolant(const VelocityGrid& grid, const std::vector<double>& f,
                  Interpolation kind = Interpolation::LogQuadratic, double floor = 1e-300);

  double operator()(const Vec& v) const;
  /// log f(v); -infinity where the interpolant vanishes.
  double log_value(const Vec& v) const;
  const VelocityGrid& grid() const { return grid_; }

 private:
  double multilinear(const Vec& v) const;
  bool log_quadratic(const Vec& v, double& out) const;

  VelocityGrid grid_;
  std::vector<double> f_;
  std::vector<double> logf_;
  std::vector<char> usable_;  ///< f > floor
  Interpolation kind_;
};

struct Moments {
  double mass = 0.0;
  Vec momentum;
  double energy = 0.0;  ///< int |v|^2 f
};

Moments moments(const VelocityGrid& grid, const std::vector<double>& f);

/// -sum w f log f with 0 log 0 = 0.
double grid_entropy(const VelocityGrid& grid, const std::vector<double>& f);

}  // namespace boltzgrad
