#include "boltzgrad/collision_operator.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "boltzgrad/error.hpp"
#include "boltzgrad/parallel.hpp"
#include "boltzgrad/rng.hpp"

namespace boltzgrad {

namespace {

template <unsigned N>
void legendre(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& b = G::weights();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      x.push_back(0.0);
      w.push_back(b[k]);
      continue;
    }
    x.push_back(a[k]);
    w.push_back(b[k]);
    x.push_back(-a[k]);
    w.push_back(b[k]);
  }
}

bool in_box(const Vec& v, const VelocityGrid& g) {
  for (int a = 0; a < g.dim; ++a)
    if (std::abs(v[a]) > g.v_cut) return false;
  return true;
}

double gain_minus_loss(const GridInterpolant& I, const Vec& v, const Vec& v1, const Vec& nu,
                       double c, double loss, bool truncate) {
  Vec vp = v + c * nu;
  Vec v1p = v1 - c * nu;
  if (truncate && !(in_box(vp, I.grid()) && in_box(v1p, I.grid()))) return 0.0;
  double lg = I.log_value(vp) + I.log_value(v1p);
  double gain = std::isfinite(lg) ? std::exp(lg) : 0.0;
  return gain - loss;
}

}  // namespace

AngularRule angular_rule(int dim, const CollisionOptions& options) {
  AngularRule r;
  const double pi = std::numbers::pi;
  if (options.angles % 2 != 0)
    throw Error(ErrorCode::InvalidParameters, "angles must be even");
  if (dim == 2) {
    for (int m = 0; m < options.angles; ++m) {
      double th = 2.0 * pi * (m + 0.5) / options.angles;
      r.nu.push_back(Vec{std::cos(th), std::sin(th), 0.0});
      r.weight.push_back(2.0 * pi / options.angles);
    }
    return r;
  }
  std::vector<double> x, w;
  switch (options.polar_nodes) {
    case 4: legendre<4>(x, w); break;
    case 8: legendre<8>(x, w); break;
    case 12: legendre<12>(x, w); break;
    case 16: legendre<16>(x, w); break;
    default: throw Error(ErrorCode::InvalidParameters, "polar_nodes must be 4, 8, 12 or 16");
  }
  for (std::size_t a = 0; a < x.size(); ++a) {
    double st = std::sqrt(std::max(0.0, 1.0 - x[a] * x[a]));
    for (int m = 0; m < options.angles; ++m) {
      double ph = 2.0 * pi * (m + 0.5) / options.angles;
      r.nu.push_back(Vec{st * std::cos(ph), st * std::sin(ph), x[a]});
      r.weight.push_back(w[a] * 2.0 * pi / options.angles);
    }
  }
  return r;
}

std::vector<double> collision_operator(const VelocityGrid& grid, const std::vector<double>& f,
                                       const CollisionOptions& options) {
  const std::size_t n = grid.size();
  if (f.size() != n) throw Error(ErrorCode::InvalidParameters, "grid/value size mismatch");
  GridInterpolant I(grid, f, options.interpolation);
  const auto nodes = grid.nodes();
  const double w = grid.weight();
  std::vector<double> Q(n, 0.0);
  if (options.quadrature == Quadrature::Tensor) {
    const AngularRule rule = angular_rule(grid.dim, options);
    // The rule is closed under nu -> -nu, so the pair (j, i) contributes
    // exactly what (i, j) does; only the upper triangle is evaluated.
    std::vector<double> pair(n * n, 0.0);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec rel = nodes[j] - nodes[i];
        const double loss = f[i] * f[j];
        double acc = 0.0;
        for (std::size_t m = 0; m < rule.nu.size(); ++m) {
          double c = dot(rel, rule.nu[m]);
          if (c <= 0.0) continue;
          acc += rule.weight[m] * c * gain_minus_loss(I, nodes[i], nodes[j], rule.nu[m], c, loss,
                                                           options.truncate_kernel);
        }
        pair[i * n + j] = acc;
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) acc += pair[std::min(i, j) * n + std::max(i, j)];
      Q[i] = w * acc;
    }
  } else {
    const double area = sphere_area(grid.dim);
    const double vol = grid.box_volume();
    parallel_for(n, [&](std::size_t i) {
      Rng g = make_stream(options.mc_seed, stage_tag("collision-mc"), i);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      double acc = 0.0;
      for (std::size_t k = 0; k < options.mc_samples; ++k) {
        std::size_t j = pick(g);
        Vec nu = unit_vector(g, grid.dim);
        double c = dot(nodes[j] - nodes[i], nu);
        if (c <= 0.0) continue;
        acc += c * gain_minus_loss(I, nodes[i], nodes[j], nu, c, f[i] * f[j], options.truncate_kernel);
      }
      Q[i] = vol * area * acc / static_cast<double>(options.mc_samples);
    });
  }
  if (options.conservation_correction) Q = conservation_correct(grid, f, std::move(Q));
  return Q;
}

std::vector<double> conservation_correct(const VelocityGrid& grid, const std::vector<double>& f,
                                         std::vector<double> Q) {
  const int d = grid.dim;
  const int K = d + 2;
  const std::size_t n = grid.size();
  const double w = grid.weight();
  auto phi = [&](const Vec& v, int a) {
    if (a == 0) return 1.0;
    if (a <= d) return v[a - 1];
    return norm2(v);
  };
  const auto nodes = grid.nodes();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < n; ++i) {
    double m = std::abs(f[i]);
    if (m == 0.0) continue;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) G(a, b) += w * m * phi(nodes[i], a) * phi(nodes[i], b);
  }
  auto solver = G.ldlt();
  // Two passes: the second removes the rounding left by the first.
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(K);
    for (std::size_t i = 0; i < n; ++i)
      for (int a = 0; a < K; ++a) r(a) += w * phi(nodes[i], a) * Q[i];
    Eigen::VectorXd lambda = solver.solve(r);
    for (std::size_t i = 0; i < n; ++i) {
      double m = std::abs(f[i]);
      if (m == 0.0) continue;
      double s = 0.0;
      for (int a = 0; a < K; ++a) s += lambda(a) * phi(nodes[i], a);
      Q[i] -= m * s;
    }
  }
  return Q;
}

std::vector<double> loss_rate(const VelocityGrid& grid, const std::vector<double>& f,
                              const CollisionOptions& options) {
  const AngularRule rule = angular_rule(grid.dim, options);
  const auto nodes = grid.nodes();
  const double w = grid.weight();
  std::vector<double> L(nodes.size(), 0.0);
  parallel_for(nodes.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const Vec rel = nodes[j] - nodes[i];
      double s = 0.0;
      for (std::size_t m = 0; m < rule.nu.size(); ++m)
        s += rule.weight[m] * std::max(0.0, dot(rel, rule.nu[m]));
      acc += f[j] * s;
    }
    L[i] = w * acc;
  });
  return L;
}

double quadrature_dissipation(const VelocityGrid& grid, const std::vector<double>& f,
                              const std::vector<double>& Q) {
  double D = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > 0.0) D -= Q[i] * std::log(f[i]);
  return D * grid.weight();
}

}  // namespace boltzgrad
