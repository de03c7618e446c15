#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "boltzgrad/torus.hpp"

namespace boltzgrad {

/// Axis-aligned phase-space box [x_lo, x_hi) x [v_lo, v_hi). Position boxes
/// live inside [0,1)^d and do not wrap.
struct PhaseCell {
  Vec x_lo, x_hi, v_lo, v_hi;
  int dim = 2;

  bool contains(const ParticleState& z) const;
  double volume() const;
  Vec x_center() const { return 0.5 * (x_lo + x_hi); }
  Vec v_center() const { return 0.5 * (v_lo + v_hi); }
};

using CellPair = std::pair<PhaseCell, PhaseCell>;

/// Regular grid: position_bins per axis on [0,1), velocity_bins per axis on [-R, R].
struct PhaseCellGrid {
  int dim = 2;
  int position_bins = 8;
  int velocity_bins = 16;
  double R = 4.0;

  /// 16 velocity bins per axis on [-4/sqrt(beta), 4/sqrt(beta)], 8 position bins per axis.
  static PhaseCellGrid defaults(int dim, double beta);

  std::size_t position_cells() const;
  std::size_t velocity_cells() const;
  std::size_t cell_count() const { return position_cells() * velocity_cells(); }
  double cell_volume() const;
  /// Cell index = position_index * velocity_cells() + velocity_index.
  std::optional<std::size_t> locate(const ParticleState& z) const;
  PhaseCell cell(std::size_t index) const;
};

}  // namespace boltzgrad
