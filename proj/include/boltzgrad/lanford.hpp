#pragma once

namespace boltzgrad {

struct LanfordTime {
  double lambda = 0.0;
  double t_star = 0.0;  ///< beta / (2 lambda)
};

/// lambda = margin * c_d * exp(-mu) * beta^{-(d+1)/2} with
/// c_d = |S^{d-1}| (2 pi)^{d/2}: the sup over v of the loss integral
/// int |v - v1| exp(-mu - beta |v1|^2 / 2) dv1 dnu grows like |v|, and this
/// constant is the Gaussian-moment bound used for the envelope weight.
/// Throws InvalidParameters unless beta > 0 and margin > 0.
LanfordTime lanford_time(double beta, double mu, double lambda_margin = 1.0, int dim = 2);

/// beta^{-(d+1)/2} t / (beta - beta_tilde); needs 0 < beta_tilde < beta.
double iterated_bound_factor(double beta, double beta_tilde, double t, int dim = 2);

/// t* for an explicitly chosen lambda.
double lanford_time_for_lambda(double beta, double lambda);

}  // namespace boltzgrad
