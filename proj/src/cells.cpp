#include "boltzgrad/cells.hpp"

#include <cmath>

namespace boltzgrad {

bool PhaseCell::contains(const ParticleState& z) const {
  for (int k = 0; k < dim; ++k) {
    if (z.x[k] < x_lo[k] || z.x[k] >= x_hi[k]) return false;
    if (z.v[k] < v_lo[k] || z.v[k] >= v_hi[k]) return false;
  }
  return true;
}

double PhaseCell::volume() const {
  double vol = 1.0;
  for (int k = 0; k < dim; ++k) vol *= (x_hi[k] - x_lo[k]) * (v_hi[k] - v_lo[k]);
  return vol;
}

PhaseCellGrid PhaseCellGrid::defaults(int dim, double beta) {
  PhaseCellGrid g;
  g.dim = dim;
  g.R = 4.0 / std::sqrt(beta);
  return g;
}

std::size_t PhaseCellGrid::position_cells() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(position_bins);
  return n;
}

std::size_t PhaseCellGrid::velocity_cells() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(velocity_bins);
  return n;
}

double PhaseCellGrid::cell_volume() const {
  double hx = 1.0 / position_bins, hv = 2.0 * R / velocity_bins;
  return std::pow(hx * hv, dim);
}

std::optional<std::size_t> PhaseCellGrid::locate(const ParticleState& z) const {
  std::size_t pi = 0, vi = 0;
  for (int k = 0; k < dim; ++k) {
    int px = static_cast<int>(std::floor(z.x[k] * position_bins));
    px = std::min(std::max(px, 0), position_bins - 1);
    double s = (z.v[k] + R) / (2.0 * R);
    if (s < 0.0 || s >= 1.0) return std::nullopt;
    int bv = std::min(static_cast<int>(std::floor(s * velocity_bins)), velocity_bins - 1);
    pi = pi * position_bins + px;
    vi = vi * velocity_bins + bv;
  }
  return pi * velocity_cells() + vi;
}

PhaseCell PhaseCellGrid::cell(std::size_t index) const {
  PhaseCell c;
  c.dim = dim;
  std::size_t pi = index / velocity_cells(), vi = index % velocity_cells();
  const double hx = 1.0 / position_bins, hv = 2.0 * R / velocity_bins;
  for (int k = dim - 1; k >= 0; --k) {
    int px = static_cast<int>(pi % position_bins);
    int bv = static_cast<int>(vi % velocity_bins);
    pi /= position_bins;
    vi /= velocity_bins;
    c.x_lo[k] = px * hx;
    c.x_hi[k] = (px + 1) * hx;
    c.v_lo[k] = -R + bv * hv;
    c.v_hi[k] = -R + (bv + 1) * hv;
  }
  return c;
}

}  // namespace boltzgrad
