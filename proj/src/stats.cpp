#include "boltzgrad/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

void RunningStats::merge(const RunningStats& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  double total = static_cast<double>(n + o.n);
  double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / total;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

ChiSquareResult chi_square_test(const std::vector<double>& counts, const std::vector<double>& probs,
                                double total, double min_expected) {
  if (counts.size() != probs.size())
    throw Error(ErrorCode::InvalidParameters, "chi-square: size mismatch");
  double listed = 0.0, covered = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    listed += counts[k];
    covered += probs[k];
  }
  double pooled_obs = std::max(0.0, total - listed), pooled_exp = 0.0;
  std::vector<double> obs, exp;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double e = total * probs[k];
    if (e < min_expected) {
      pooled_obs += counts[k];
      pooled_exp += e;
    } else {
      obs.push_back(counts[k]);
      exp.push_back(e);
    }
  }
  pooled_exp += total * std::max(0.0, 1.0 - covered);
  if (pooled_exp >= min_expected || (obs.empty() && pooled_exp > 0.0)) {
    obs.push_back(pooled_obs);
    exp.push_back(pooled_exp);
  } else if (!obs.empty()) {
    // Too sparse to stand alone: fold into the least populated regular bin.
    std::size_t j = 0;
    for (std::size_t k = 1; k < exp.size(); ++k)
      if (exp[k] < exp[j]) j = k;
    obs[j] += pooled_obs;
    exp[j] += pooled_exp;
  }
  ChiSquareResult out;
  for (std::size_t k = 0; k < obs.size(); ++k)
    out.statistic += (obs[k] - exp[k]) * (obs[k] - exp[k]) / exp[k];
  int bins = static_cast<int>(obs.size());
  out.dof = bins - 1;
  if (out.dof < 1) {
    out.p_value = 1.0;
    return out;
  }
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidParameters, "slope needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

double gaussian_interval_probability(double a, double b, double mean, double sigma) {
  const double s = sigma * std::sqrt(2.0);
  return 0.5 * (std::erf((b - mean) / s) - std::erf((a - mean) / s));
}

}  // namespace boltzgrad
