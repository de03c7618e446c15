#include "boltzgrad/velocity_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

VelocityGrid VelocityGrid::defaults(int dim, double beta) {
  VelocityGrid g;
  g.dim = dim;
  g.n = dim == 2 ? 32 : 16;
  g.v_cut = 5.0 / std::sqrt(beta);
  return g;
}

double VelocityGrid::weight() const { return std::pow(h(), dim); }

std::size_t VelocityGrid::size() const {
  std::size_t s = 1;
  for (int k = 0; k < dim; ++k) s *= static_cast<std::size_t>(n);
  return s;
}

double VelocityGrid::box_volume() const { return std::pow(2.0 * v_cut, dim); }

Vec VelocityGrid::node(std::size_t index) const {
  Vec v;
  for (int k = dim - 1; k >= 0; --k) {
    v[k] = coordinate(static_cast<int>(index % n));
    index /= n;
  }
  return v;
}

std::vector<Vec> VelocityGrid::nodes() const {
  std::vector<Vec> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
  return out;
}

std::vector<double> project(const VelocityGrid& grid, const std::function<double(const Vec&)>& g) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(grid.node(i));
  return f;
}

GridInterpolant::GridInterpolant(const VelocityGrid& grid, const std::vector<double>& f,
                                 Interpolation kind, double floor)
    : grid_(grid), f_(f), logf_(f.size()), usable_(f.size()), kind_(kind) {
  if (f.size() != grid.size()) throw Error(ErrorCode::InvalidParameters, "grid/value size mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) {
    usable_[i] = f[i] > floor;
    logf_[i] = usable_[i] ? std::log(f[i]) : 0.0;
  }
}

double GridInterpolant::multilinear(const Vec& v) const {
  const int n = grid_.n;
  const double h = grid_.h();
  int base[3] = {0, 0, 0};
  double frac[3] = {0, 0, 0};
  for (int a = 0; a < grid_.dim; ++a) {
    double s = (v[a] + grid_.v_cut) / h - 0.5;
    int k = static_cast<int>(std::floor(s));
    // Between the outermost node and the cut the nodal value is held constant.
    if (k < 0) {
      k = 0;
      s = 0.0;
    } else if (k >= n - 1) {
      k = n - 2;
      s = n - 1;
    }
    base[a] = k;
    frac[a] = s - k;
  }
  double out = 0.0;
  const int corners = 1 << grid_.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < grid_.dim; ++a) {
      int bit = (c >> a) & 1;
      w *= bit ? frac[a] : 1.0 - frac[a];
      idx = idx * n + static_cast<std::size_t>(base[a] + bit);
    }
    if (w != 0.0) out += w * f_[idx];
  }
  return out;
}

bool GridInterpolant::log_quadratic(const Vec& v, double& out) const {
  const int n = grid_.n;
  const double inv_h = n / (2.0 * grid_.v_cut);
  int centre[3] = {1, 1, 1};
  double lag[3][3] = {{0, 1, 0}, {0, 1, 0}, {0, 1, 0}};
  for (int a = 0; a < grid_.dim; ++a) {
    double s = (v[a] + grid_.v_cut) * inv_h - 0.5;
    int c = std::clamp(static_cast<int>(std::lround(s)), 1, n - 2);
    double x = s - c;
    centre[a] = c;
    lag[a][0] = 0.5 * x * (x - 1.0);
    lag[a][1] = (1.0 - x) * (1.0 + x);
    lag[a][2] = 0.5 * x * (x + 1.0);
  }
  const std::size_t sn = static_cast<std::size_t>(n);
  double acc = 0.0;
  if (grid_.dim == 2) {
    for (int p = 0; p < 3; ++p) {
      const std::size_t row = static_cast<std::size_t>(centre[0] - 1 + p) * sn + centre[1] - 1;
      double r = 0.0;
      for (int q = 0; q < 3; ++q) {
        if (!usable_[row + q]) return false;
        r += lag[1][q] * logf_[row + q];
      }
      acc += lag[0][p] * r;
    }
  } else {
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        const std::size_t row =
            (static_cast<std::size_t>(centre[0] - 1 + p) * sn + centre[1] - 1 + q) * sn +
            centre[2] - 1;
        double r = 0.0;
        for (int k = 0; k < 3; ++k) {
          if (!usable_[row + k]) return false;
          r += lag[2][k] * logf_[row + k];
        }
        acc += lag[0][p] * lag[1][q] * r;
      }
  }
  out = acc;
  return true;
}

double GridInterpolant::operator()(const Vec& v) const {
  for (int a = 0; a < grid_.dim; ++a)
    if (std::abs(v[a]) > grid_.v_cut) return 0.0;
  double lf;
  if (kind_ == Interpolation::LogQuadratic && log_quadratic(v, lf)) return std::exp(lf);
  return multilinear(v);
}

double GridInterpolant::log_value(const Vec& v) const {
  for (int a = 0; a < grid_.dim; ++a)
    if (std::abs(v[a]) > grid_.v_cut) return -std::numeric_limits<double>::infinity();
  double lf;
  if (kind_ == Interpolation::LogQuadratic && log_quadratic(v, lf)) return lf;
  double m = multilinear(v);
  return m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
}

Moments moments(const VelocityGrid& grid, const std::vector<double>& f) {
  Moments m;
  const double w = grid.weight();
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec v = grid.node(i);
    m.mass += w * f[i];
    m.momentum = m.momentum + (w * f[i]) * v;
    m.energy += w * f[i] * norm2(v);
  }
  return m;
}

double grid_entropy(const VelocityGrid& grid, const std::vector<double>& f) {
  double s = 0.0;
  for (double x : f)
    if (x > 0.0) s -= x * std::log(x);
  return s * grid.weight();
}

}  // namespace boltzgrad
