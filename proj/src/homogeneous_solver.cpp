#include "boltzgrad/homogeneous_solver.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

std::vector<double> moment_matched_maxwellian(const VelocityGrid& grid,
                                              const std::vector<double>& f) {
  Moments m = moments(grid, f);
  if (!(m.mass > 0)) throw Error(ErrorCode::InvalidParameters, "mass must be positive");
  Vec u = m.momentum / m.mass;
  double T = (m.energy / m.mass - norm2(u)) / grid.dim;
  return project(grid, [&](const Vec& v) {
    return m.mass * std::pow(2.0 * std::numbers::pi * T, -0.5 * grid.dim) *
           std::exp(-norm2(v - u) / (2.0 * T));
  });
}

TraceRow trace_row(const HomogeneousState& s, const std::vector<double>& Q) {
  TraceRow r;
  r.t = s.t;
  r.moments = moments(s.grid, s.f);
  r.S = grid_entropy(s.grid, s.f);
  r.D = quadrature_dissipation(s.grid, s.f, Q);
  return r;
}

Trajectory solve_homogeneous(const HomogeneousState& f0, double t_final, double dt,
                             TimeDirection direction, const SolverOptions& options) {
  if (!(dt > 0) || !(t_final >= 0))
    throw Error(ErrorCode::InvalidParameters, "need dt > 0 and t_final >= 0");
  const bool reverse = direction == TimeDirection::Reverse;
  if (reverse && t_final > options.reverse_horizon)
    throw Error(ErrorCode::InvalidParameters,
                fmt::format("reverse horizon {} exceeds the configured {}", t_final,
                            options.reverse_horizon));
  if (options.check_stability) {
    auto L = loss_rate(f0.grid, f0.f, options.collision);
    double lmax = *std::max_element(L.begin(), L.end());
    if (dt * lmax >= 0.5)
      throw Error(ErrorCode::InvalidParameters,
                  fmt::format("dt = {} violates dt * sup loss rate ({}) < 1/2", dt, lmax));
  }
  const double sign = reverse ? -1.0 : 1.0;
  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_final / dt - 1e-9)));
  const double h = steps ? t_final / static_cast<double>(steps) : 0.0;
  Trajectory tr;
  HomogeneousState s = f0;
  std::vector<double> k1 = collision_operator(s.grid, s.f, options.collision);
  tr.states.push_back(s);
  tr.trace.push_back(trace_row(s, k1));
  const std::size_t n = s.f.size();
  for (std::size_t step = 1; step <= steps; ++step) {
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = s.f[i] + sign * h * k1[i];
    std::vector<double> k2 = collision_operator(s.grid, mid, options.collision);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = s.f[i] + 0.5 * sign * h * (k1[i] + k2[i]);
    double fmax = *std::max_element(next.begin(), next.end());
    double fmin = *std::min_element(next.begin(), next.end());
    if (fmin < -options.negativity_tolerance * fmax) {
      if (reverse) {
        spdlog::warn("reverse solve stopped at t = {}: f < 0", s.t + h);
        tr.stopped_negative = true;
        break;
      }
      throw Error(ErrorCode::NegativeDensity, fmt::format("min f = {} at t = {}", fmin, s.t + h));
    }
    s.f = std::move(next);
    s.t = step == steps ? t_final : static_cast<double>(step) * h;
    k1 = collision_operator(s.grid, s.f, options.collision);
    if (step % options.output_every == 0 || step == steps) {
      tr.states.push_back(s);
      tr.trace.push_back(trace_row(s, k1));
    }
  }
  return tr;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, int dim) {
  out << "t,mass";
  for (int k = 1; k <= dim; ++k) out << ",p_" << k;
  out << ",energy,S,D\n";
  for (const auto& r : trace) {
    out << fmt::format("{:.17g},{:.17g}", r.t, r.moments.mass);
    for (int k = 0; k < dim; ++k) out << fmt::format(",{:.17g}", r.moments.momentum[k]);
    out << fmt::format(",{:.17g},{:.17g},{:.17g}\n", r.moments.energy, r.S, r.D);
  }
}

void write_grid_csv(std::ostream& out, const HomogeneousState& s) {
  for (int k = 1; k <= s.grid.dim; ++k) out << "v_" << k << ",";
  out << "f\n";
  for (std::size_t i = 0; i < s.f.size(); ++i) {
    Vec v = s.grid.node(i);
    for (int k = 0; k < s.grid.dim; ++k) out << fmt::format("{:.17g},", v[k]);
    out << fmt::format("{:.17g}\n", s.f[i]);
  }
}

}  // namespace boltzgrad
