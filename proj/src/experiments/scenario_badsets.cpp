#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <sstream>

#include "boltzgrad/badsets.hpp"
#include "boltzgrad/experiments/runner.hpp"
#include "boltzgrad/stats.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

void run_badset_scaling(const ExperimentConfig& c, RunOutput& out) {
  BadSetSpec base;
  base.dim = static_cast<int>(c.num("dim"));
  base.n = c.count("n");
  base.R = c.num("R");
  base.T = c.num("T");
  base.sign = Sign::Minus;
  auto eps0 = c.list("eps0_list");
  std::sort(eps0.begin(), eps0.end(), std::greater<>());

  // (a) nesting and (d) reversal duality on the same samples.
  Rng g = stream(c, "badsets-nesting");
  std::size_t nest_fail = 0, dual_fail = 0;
  const std::size_t nest_samples = c.count("nesting_samples");
  for (std::size_t k = 0; k < nest_samples; ++k) {
    auto Z = sample_uniform_configuration(base, g);
    bool prev = true;
    auto flipped = Z;
    for (auto& z : flipped) z.v = -z.v;
    for (double e0 : eps0) {
      BadSetSpec s = base;
      s.eps0 = e0;
      bool in = in_bad_set(Z, s);
      if (in && !prev) ++nest_fail;  // inside at smaller eps0 but outside at larger
      prev = in;
      BadSetSpec plus = s;
      plus.sign = Sign::Plus;
      if (in != in_bad_set(flipped, plus)) ++dual_fail;
    }
  }
  out.assert_that("nesting in eps0 holds pointwise", nest_fail == 0,
                  {{"violations", nest_fail}, {"samples", nest_samples}});
  out.assert_that("reversal duality is exact", dual_fail == 0,
                  {{"violations", dual_fail}, {"samples", nest_samples}});

  // (b) scaling slope, common random numbers across eps0.
  Rng gm = stream(c, "badsets-sweep");
  auto minus = estimate_measure_sweep(base, eps0, c.count("samples"), gm);
  BadSetSpec pbase = base;
  pbase.sign = Sign::Plus;
  Rng gp = stream(c, "badsets-sweep-plus");
  auto plus = estimate_measure_sweep(pbase, eps0, c.count("samples"), gp);
  std::vector<double> x, y;
  for (const auto& m : minus) {
    x.push_back(m.spec.eps0);
    y.push_back(m.fraction);
  }
  const double slope = loglog_slope(x, y);
  const double expected = base.dim - 1;
  const double tol = c.num("slope_tolerance");
  out.assert_that("log-log slope of |B^-| equals d-1", std::abs(slope - expected) <= tol,
                  {{"slope", slope}, {"expected", expected}, {"tolerance", tol}});

  // (c) intersection smallness.
  BadSetSpec inter = base;
  inter.eps0 = c.num("eps0_intersection");
  Rng gi = stream(c, "badsets-intersection");
  auto both = estimate_intersection(inter, c.count("samples"), gi);
  Rng go = stream(c, "badsets-one-sided");
  auto one = estimate_measure(inter, c.count("samples"), go);
  const double factor = c.num("intersection_factor");
  out.assert_that("intersection much smaller than one-sided set",
                  both.fraction * factor <= one.fraction,
                  {{"intersection", both.fraction}, {"one_sided", one.fraction}, {"factor", factor}});

  std::ostringstream csv;
  write_measure_csv_header(csv);
  for (const auto& m : minus) write_measure_csv_row(csv, m);
  for (const auto& m : plus) write_measure_csv_row(csv, m);
  out.write("badsets_sweep.csv", csv.str());
  std::ostringstream ic;
  ic << "eps0,n,R,T,intersection,intersection_stderr,one_sided,one_sided_stderr,samples\n";
  ic << fmt::format("{},{},{},{},{},{},{},{},{}\n", fmt_double(inter.eps0), inter.n,
                    fmt_double(inter.R), fmt_double(inter.T), fmt_double(both.fraction),
                    fmt_double(both.stderr), fmt_double(one.fraction), fmt_double(one.stderr),
                    both.samples);
  out.write("badsets_intersection.csv", ic.str());
  out.note("slope", slope);
}

}  // namespace boltzgrad::experiments
