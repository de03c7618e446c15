#include "boltzgrad/density.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

double maxwellian(const Vec& v, int dim, double beta) {
  return std::pow(beta / (2.0 * std::numbers::pi), 0.5 * dim) * std::exp(-0.5 * beta * norm2(v));
}

DensitySpec DensitySpec::maxwellian(int dim, double beta) {
  DensitySpec s;
  s.dim = dim;
  s.beta = beta;
  s.form = DensityForm::Maxwellian;
  s.mu = 0.5 * dim * std::log(2.0 * std::numbers::pi / beta);
  return s;
}

DensitySpec DensitySpec::two_bump(int dim, double beta, double shift) {
  DensitySpec s;
  s.dim = dim;
  s.beta = beta;
  s.form = DensityForm::TwoBump;
  s.shift = shift;
  s.mu = 0.5 * dim * std::log(std::numbers::pi / beta) - shift * shift;
  return s;
}

DensitySpec DensitySpec::custom(int dim, double beta, double mu,
                                std::function<double(const Vec&)> g) {
  DensitySpec s;
  s.dim = dim;
  s.beta = beta;
  s.mu = mu;
  s.form = DensityForm::Custom;
  s.custom_velocity = std::move(g);
  return s;
}

DensitySpec DensitySpec::with_cosine_profile(double amplitude) const {
  if (!(std::abs(amplitude) < 1.0))
    throw Error(ErrorCode::InvalidParameters, "cosine profile amplitude must satisfy |a| < 1");
  DensitySpec s = *this;
  s.cosine_amplitude = amplitude;
  s.spatial_max = 1.0 + std::abs(amplitude);
  s.spatial_profile = [amplitude](const Vec& x) {
    return 1.0 + amplitude * std::cos(2.0 * std::numbers::pi * x[0]);
  };
  // The envelope must hold for rho * g, so the constant absorbs sup rho.
  s.mu = mu - std::log(s.spatial_max);
  return s;
}

double DensitySpec::velocity_density(const Vec& v) const {
  switch (form) {
    case DensityForm::Maxwellian: return boltzgrad::maxwellian(v, dim, beta);
    case DensityForm::TwoBump: {
      Vec u;
      u[0] = shift / std::sqrt(beta);
      return 0.5 * (boltzgrad::maxwellian(v - u, dim, 2.0 * beta) +
                    boltzgrad::maxwellian(v + u, dim, 2.0 * beta));
    }
    case DensityForm::Custom: return custom_velocity(v);
  }
  return 0.0;
}

double DensitySpec::spatial_density(const Vec& x) const {
  return spatial_profile ? spatial_profile(x) : 1.0;
}

double DensitySpec::temperature() const {
  switch (form) {
    case DensityForm::Maxwellian: return 1.0 / beta;
    case DensityForm::TwoBump:
      return (0.5 * dim / beta + shift * shift / beta) / dim;
    case DensityForm::Custom: break;
  }
  // Tensor quadrature of the second moment on [-8/sqrt(beta), 8/sqrt(beta)]^d.
  const int m = dim == 2 ? 161 : 61;
  const double L = 8.0 / std::sqrt(beta), h = 2.0 * L / (m - 1);
  double mass = 0.0, second = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < (dim == 3 ? m : 1); ++c) {
        Vec v{-L + a * h, -L + b * h, dim == 3 ? -L + c * h : 0.0};
        double g = velocity_density(v);
        mass += g;
        second += g * norm2(v);
      }
  return second / mass / dim;
}

std::string DensitySpec::form_name() const {
  switch (form) {
    case DensityForm::Maxwellian: return "maxwellian";
    case DensityForm::TwoBump: return "two_bump";
    case DensityForm::Custom: return "custom";
  }
  return "unknown";
}

Vec sample_velocity(const DensitySpec& spec, Rng& rng) {
  const double sigma = 1.0 / std::sqrt(spec.beta);
  if (spec.form == DensityForm::Maxwellian) return gaussian_vec(rng, spec.dim, sigma);
  // Velocity-only envelope: g(v) <= exp(-mu_v - beta |v|^2/2), mu_v = mu + log(sup rho).
  const double mu_v = spec.mu + std::log(spec.spatial_max);
  for (;;) {
    Vec v = gaussian_vec(rng, spec.dim, sigma);
    double ratio = spec.velocity_density(v) * std::exp(mu_v + 0.5 * spec.beta * norm2(v));
    if (ratio > 1.0 + 1e-12)
      throw Error(ErrorCode::EnvelopeViolated,
                  fmt::format("f0 exceeds its envelope by a factor {:.6g}", ratio));
    if (uniform01(rng) < ratio) return v;
  }
}

Vec sample_position(const DensitySpec& spec, Rng& rng) {
  if (!spec.spatial_profile) return uniform_position(rng, spec.dim);
  for (;;) {
    Vec x = uniform_position(rng, spec.dim);
    if (uniform01(rng) * spec.spatial_max < spec.spatial_profile(x)) return x;
  }
}

double envelope_probe(const DensitySpec& spec, double vmax, int nodes_per_axis) {
  const double h = 2.0 * vmax / (nodes_per_axis - 1);
  const int third = spec.dim == 3 ? nodes_per_axis : 1;
  double worst = 0.0;
  for (int a = 0; a < nodes_per_axis; ++a)
    for (int b = 0; b < nodes_per_axis; ++b)
      for (int c = 0; c < third; ++c) {
        Vec v{-vmax + a * h, -vmax + b * h, spec.dim == 3 ? -vmax + c * h : 0.0};
        double val = spec.spatial_max * spec.velocity_density(v) *
                     std::exp(spec.mu + 0.5 * spec.beta * norm2(v));
        worst = std::max(worst, val);
      }
  return worst;
}

}  // namespace boltzgrad
