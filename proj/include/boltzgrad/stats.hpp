#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace boltzgrad {

/// Welford accumulator; merge() is used for ordered shard reductions.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const RunningStats& o);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_mean() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of histogram counts against cell probabilities,
/// out of `total` samples. Samples that fell in no listed cell are compared
/// against the probability mass not covered by `probs`; cells with expected
/// count below `min_expected` are pooled into that same bin.
ChiSquareResult chi_square_test(const std::vector<double>& counts, const std::vector<double>& probs,
                                double total, double min_expected = 5.0);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Probability that a 1-d Gaussian N(mean, sigma^2) falls in [a, b].
double gaussian_interval_probability(double a, double b, double mean, double sigma);

}  // namespace boltzgrad
