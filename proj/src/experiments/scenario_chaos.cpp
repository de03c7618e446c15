#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "boltzgrad/experiments/runner.hpp"
#include "scenario_common.hpp"

namespace boltzgrad::experiments {

namespace {

std::vector<CellPair> all_pairs(const PhaseCellGrid& g) {
  std::vector<CellPair> pairs;
  for (std::size_t a = 0; a < g.cell_count(); ++a)
    for (std::size_t b = a + 1; b < g.cell_count(); ++b) pairs.emplace_back(g.cell(a), g.cell(b));
  return pairs;
}

}  // namespace

void run_chaos(const ExperimentConfig& c, RunOutput& out) {
  const DensitySpec f0 = make_density(c);
  const int d = f0.dim;
  PhaseCellGrid g;
  g.dim = d;
  g.position_bins = static_cast<int>(c.count("position_bins"));
  g.velocity_bins = static_cast<int>(c.count("velocity_bins"));
  g.R = c.num("velocity_R");
  const auto pairs = all_pairs(g);
  const double tau = c.num("tau");
  const double k_sigma = c.num("sigma_tolerance");

  std::ostringstream csv;
  csv << "N,eps,t,pair,f2,f1a,f1b,defect,stderr\n";
  struct Row {
    double N, max_abs, stderr;
  };
  std::vector<Row> at0, at_tau;
  for (double Nd : c.list("N_list")) {
    const auto N = static_cast<std::size_t>(Nd);
    const double eps = scaled_eps(Nd, c.num("N_eps"), d);
    auto e0 = sample_ensemble(c, f0, N, eps, c.count("replicas"), "chaos-initial");
    auto e1 = evolve(e0, tau);
    for (int which = 0; which < 2; ++which) {
      const auto r = chaos_defect(which == 0 ? e0 : e1, pairs);
      const double t = which == 0 ? 0.0 : tau;
      for (std::size_t k = 0; k < r.pairs.size(); ++k) {
        const auto& p = r.pairs[k];
        csv << fmt::format("{},{},{},{},{},{},{},{},{}\n", N, fmt_double(eps), fmt_double(t), k,
                           fmt_double(p.f2), fmt_double(p.f1a), fmt_double(p.f1b),
                           fmt_double(p.defect), fmt_double(p.stderr));
      }
      (which == 0 ? at0 : at_tau).push_back({Nd, r.max_abs, r.max_stderr});
    }
  }
  out.write("chaos_defect.csv", csv.str());

  auto trend = [&](const std::vector<Row>& rows, const char* label) {
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      j.push_back({{"N", rows[k].N}, {"max_abs_defect", rows[k].max_abs},
                   {"stderr", rows[k].stderr}});
      if (k == 0) continue;
      const double tol = k_sigma * std::hypot(rows[k].stderr, rows[k - 1].stderr);
      ok = ok && rows[k].max_abs <= rows[k - 1].max_abs + tol;
    }
    out.assert_that(fmt::format("max chaos defect nonincreasing in N at {}", label), ok,
                    {{"rows", j}, {"sigma_tolerance", k_sigma}});
  };
  trend(at0, "t = 0");
  trend(at_tau, "t = tau");
  out.note("pairs", pairs.size());
}

}  // namespace boltzgrad::experiments
