#include "boltzgrad/lanford.hpp"

#include <cmath>
#include <numbers>

#include "boltzgrad/error.hpp"
#include "boltzgrad/rng.hpp"

namespace boltzgrad {

LanfordTime lanford_time(double beta, double mu, double lambda_margin, int dim) {
  if (!(beta > 0) || !(lambda_margin > 0) || (dim != 2 && dim != 3))
    throw Error(ErrorCode::InvalidParameters, "lanford_time needs beta > 0, margin > 0, d in {2,3}");
  const double cd = sphere_area(dim) * std::pow(2.0 * std::numbers::pi, 0.5 * dim);
  LanfordTime r;
  r.lambda = lambda_margin * cd * std::exp(-mu) * std::pow(beta, -0.5 * (dim + 1));
  r.t_star = beta / (2.0 * r.lambda);
  return r;
}

double iterated_bound_factor(double beta, double beta_tilde, double t, int dim) {
  if (!(beta > 0) || !(beta_tilde > 0) || !(beta_tilde < beta))
    throw Error(ErrorCode::InvalidParameters, "need 0 < beta_tilde < beta");
  return std::pow(beta, -0.5 * (dim + 1)) * t / (beta - beta_tilde);
}

double lanford_time_for_lambda(double beta, double lambda) {
  if (!(beta > 0) || !(lambda > 0)) throw Error(ErrorCode::InvalidParameters, "need beta, lambda > 0");
  return beta / (2.0 * lambda);
}

}  // namespace boltzgrad
