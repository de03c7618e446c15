#pragma once

#include <functional>
#include <string>

#include "boltzgrad/rng.hpp"
#include "boltzgrad/vec.hpp"

namespace boltzgrad {

enum class DensityForm { Maxwellian, TwoBump, Custom };

/// One-particle density f0(x, v) = rho(x) g(v) on T^d x R^d together with a
/// Gaussian envelope f0 <= exp(-mu - beta |v|^2 / 2).
///
/// The two-bump form is the equal mixture of Maxwellians of inverse
/// temperature 2*beta centred at +/- (shift / sqrt(beta)) e_1. Its envelope
/// constant is mu = (d/2) log(pi/beta) - shift^2, from the pointwise bound
/// exp(-beta|v-u|^2 + beta|v|^2/2) <= exp(beta|u|^2) applied to each bump.
struct DensitySpec {
  int dim = 2;
  double beta = 1.0;
  double mu = 0.0;
  DensityForm form = DensityForm::Maxwellian;
  double shift = 1.0;  ///< two-bump only

  std::function<double(const Vec&)> custom_velocity;  ///< Custom only
  /// Spatial profile rho on T^d with integral 1; empty means uniform.
  std::function<double(const Vec&)> spatial_profile;
  double spatial_max = 1.0;  ///< sup of rho
  double cosine_amplitude = 0.0;  ///< recorded when built by with_cosine_profile

  static DensitySpec maxwellian(int dim, double beta);
  static DensitySpec two_bump(int dim, double beta, double shift = 1.0);
  static DensitySpec custom(int dim, double beta, double mu, std::function<double(const Vec&)> g);
  /// rho(x) = 1 + a cos(2 pi x_1), |a| < 1.
  DensitySpec with_cosine_profile(double amplitude) const;

  double velocity_density(const Vec& v) const;
  double spatial_density(const Vec& x) const;
  double operator()(const Vec& x, const Vec& v) const {
    return spatial_density(x) * velocity_density(v);
  }
  /// Temperature of the moment-matched Maxwellian, (1/d) * int |v|^2 g.
  double temperature() const;
  std::string form_name() const;
};

/// Maxwellian density with the given inverse temperature.
double maxwellian(const Vec& v, int dim, double beta);

/// Draw from g: Gaussian for the Maxwellian form, otherwise rejection against
/// the Gaussian envelope. Throws EnvelopeViolated if g exceeds its envelope.
Vec sample_velocity(const DensitySpec& spec, Rng& rng);
Vec sample_position(const DensitySpec& spec, Rng& rng);

/// Largest value of f0 * exp(mu + beta |v|^2 / 2) over a probe grid of
/// velocities in [-vmax, vmax]^d (times spatial_max). Must be <= 1.
double envelope_probe(const DensitySpec& spec, double vmax = 8.0, int nodes_per_axis = 161);

}  // namespace boltzgrad
