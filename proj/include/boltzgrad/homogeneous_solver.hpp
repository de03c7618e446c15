#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "boltzgrad/collision_operator.hpp"
#include "boltzgrad/velocity_grid.hpp"

namespace boltzgrad {

struct HomogeneousState {
  VelocityGrid grid;
  std::vector<double> f;
  double t = 0.0;
};

enum class TimeDirection { Forward, Reverse };

struct SolverOptions {
  CollisionOptions collision;
  /// Keep every k-th step in the trajectory (the final state is always kept).
  std::size_t output_every = 1;
  /// Reverse runs refuse t_final above this.
  double reverse_horizon = 0.1;
  /// Forward runs throw NegativeDensity when min f < -this * max f.
  double negativity_tolerance = 1e-10;
  bool check_stability = true;
};

struct TraceRow {
  double t = 0.0;
  Moments moments;
  double S = 0.0;  ///< -int f log f
  double D = 0.0;  ///< -int Q log f, quadrature
};

struct Trajectory {
  std::vector<HomogeneousState> states;
  std::vector<TraceRow> trace;
  bool stopped_negative = false;  ///< reverse run ended early on f < 0
};

/// Heun (RK2) stepping of df/dt = +Q (forward) or -Q (reverse). Requires
/// dt * max loss rate < 1/2 at t = 0.
Trajectory solve_homogeneous(const HomogeneousState& f0, double t_final, double dt,
                             TimeDirection direction, const SolverOptions& options = {});

/// Maxwellian with the mass, mean velocity and temperature of f, on the same grid.
std::vector<double> moment_matched_maxwellian(const VelocityGrid& grid,
                                              const std::vector<double>& f);

TraceRow trace_row(const HomogeneousState& s, const std::vector<double>& Q);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, int dim);
void write_grid_csv(std::ostream& out, const HomogeneousState& s);

}  // namespace boltzgrad
