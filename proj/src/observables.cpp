#include "boltzgrad/observables.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "boltzgrad/density.hpp"
#include "boltzgrad/parallel.hpp"
#include "boltzgrad/stats.hpp"

namespace boltzgrad {

namespace {

void require_nonempty(const Ensemble& e) {
  if (e.empty()) throw Error(ErrorCode::EmptyEnsemble, "ensemble is empty");
  for (const auto& c : e)
    if (c.particles.empty()) throw Error(ErrorCode::EmptyEnsemble, "replica without particles");
}

// Sum and sum of squares of a per-replica quantity, folded cell by cell.
struct Accumulator {
  std::vector<double> sum, sumsq;
  explicit Accumulator(std::size_t n) : sum(n, 0.0), sumsq(n, 0.0) {}
  void add(std::size_t k, double x) {
    sum[k] += x;
    sumsq[k] += x * x;
  }
  void finish(double replicas, double volume, std::vector<double>& value,
              std::vector<double>& err) const {
    value.resize(sum.size());
    err.resize(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
      double mean = sum[k] / replicas;
      double var = replicas > 1 ? std::max(0.0, (sumsq[k] - sum[k] * mean) / (replicas - 1)) : 0.0;
      value[k] = mean / volume;
      err[k] = std::sqrt(var / replicas) / volume;
    }
  }
};

std::vector<std::pair<std::size_t, double>> occupied(const Configuration& c,
                                                     const PhaseCellGrid& grid, bool symmetrized) {
  std::map<std::size_t, double> counts;
  const std::size_t used = symmetrized ? c.particles.size() : 1;
  for (std::size_t p = 0; p < used; ++p)
    if (auto idx = grid.locate(c.particles[p])) counts[*idx] += 1.0;
  return {counts.begin(), counts.end()};
}

}  // namespace

MarginalEstimate estimate_marginal(const Ensemble& ensemble, int order, const PhaseCellGrid& grid,
                                   const MarginalOptions& options) {
  require_nonempty(ensemble);
  if (order != 1 && order != 2) throw Error(ErrorCode::InvalidParameters, "order must be 1 or 2");
  const std::size_t cc = grid.cell_count();
  if (order == 2 && cc * cc > 4'000'000)
    throw Error(ErrorCode::SizeLimit, fmt::format("{} cells squared is too many", cc));
  MarginalEstimate m;
  m.order = order;
  m.grid = grid;
  Accumulator acc(order == 1 ? cc : cc * cc);
  for (const auto& c : ensemble) {
    const double N = static_cast<double>(c.particles.size());
    if (order == 1) {
      const double norm = options.symmetrized ? N : 1.0;
      for (auto [k, n] : occupied(c, grid, options.symmetrized)) acc.add(k, n / norm);
      continue;
    }
    if (!options.symmetrized) {
      if (c.particles.size() < 2) throw Error(ErrorCode::InvalidParameters, "need 2 particles");
      auto a = grid.locate(c.particles[0]);
      auto b = grid.locate(c.particles[1]);
      if (a && b) acc.add(*a * cc + *b, 1.0);
      continue;
    }
    auto occ = occupied(c, grid, true);
    const double pairs = N * (N - 1.0);
    for (auto [a, na] : occ)
      for (auto [b, nb] : occ) acc.add(a * cc + b, (a == b ? na * (na - 1.0) : na * nb) / pairs);
  }
  const double vol = order == 1 ? grid.cell_volume() : grid.cell_volume() * grid.cell_volume();
  acc.finish(static_cast<double>(ensemble.size()), vol, m.values, m.stderr);
  return m;
}

std::vector<PairValue> estimate_pair_marginal(const Ensemble& ensemble,
                                              const std::vector<CellPair>& pairs,
                                              const MarginalOptions& options) {
  require_nonempty(ensemble);
  std::vector<PairValue> out;
  for (const auto& [A, B] : pairs) {
    RunningStats st;
    for (const auto& c : ensemble) {
      const auto& p = c.particles;
      if (!options.symmetrized) {
        if (p.size() < 2) throw Error(ErrorCode::InvalidParameters, "need 2 particles");
        st.add(A.contains(p[0]) && B.contains(p[1]) ? 1.0 : 0.0);
        continue;
      }
      double a = 0, b = 0, both = 0;
      for (const auto& z : p) {
        bool ia = A.contains(z), ib = B.contains(z);
        a += ia;
        b += ib;
        both += ia && ib;
      }
      const double N = static_cast<double>(p.size());
      st.add((a * b - both) / (N * (N - 1.0)));
    }
    const double vol = A.volume() * B.volume();
    out.push_back({st.mean / vol, st.stderr_mean() / vol});
  }
  return out;
}

ChaosDefectResult chaos_defect(const Ensemble& ensemble, const std::vector<CellPair>& pairs,
                               const DefectNormalization& normalization) {
  require_nonempty(ensemble);
  const bool corr = normalization.kind == DefectNormalization::Correlation;
  if (corr && !(normalization.mu > 0))
    throw Error(ErrorCode::InvalidParameters, "correlation normalization needs mu > 0");
  const std::size_t P = pairs.size();
  const double R = static_cast<double>(ensemble.size());
  // Per-replica normalized counts: a, b and ordered distinct pairs in A x B.
  std::vector<std::vector<double>> xa(P), xb(P), xab(P);
  for (std::size_t k = 0; k < P; ++k) {
    xa[k].reserve(ensemble.size());
    xb[k].reserve(ensemble.size());
    xab[k].reserve(ensemble.size());
  }
  parallel_for(P, [&](std::size_t k) {
    const auto& [A, B] = pairs[k];
    for (const auto& c : ensemble) {
      double a = 0, b = 0, both = 0;
      for (const auto& z : c.particles) {
        bool ia = A.contains(z), ib = B.contains(z);
        a += ia;
        b += ib;
        both += ia && ib;
      }
      const double N = static_cast<double>(c.particles.size());
      const double n1 = corr ? normalization.mu : N;
      const double n2 = corr ? normalization.mu * normalization.mu : N * (N - 1.0);
      xa[k].push_back(a / n1);
      xb[k].push_back(b / n1);
      xab[k].push_back(n2 > 0 ? (a * b - both) / n2 : 0.0);
    }
  });
  ChaosDefectResult res;
  for (std::size_t k = 0; k < P; ++k) {
    const double vA = pairs[k].first.volume(), vB = pairs[k].second.volume();
    DefectEstimate d;
    for (std::size_t r = 0; r < ensemble.size(); ++r) {
      d.f1a += xa[k][r];
      d.f1b += xb[k][r];
      d.f2 += xab[k][r];
    }
    d.f1a /= R * vA;
    d.f1b /= R * vB;
    d.f2 /= R * vA * vB;
    d.defect = d.f2 - d.f1a * d.f1b;
    RunningStats phi;
    for (std::size_t r = 0; r < ensemble.size(); ++r)
      phi.add(xab[k][r] / (vA * vB) - d.f1b * xa[k][r] / vA - d.f1a * xb[k][r] / vB);
    d.stderr = phi.stderr_mean();
    if (std::abs(d.defect) > res.max_abs || k == 0) {
      res.max_abs = std::abs(d.defect);
      res.max_stderr = d.stderr;
      res.argmax = k;
    }
    res.pairs.push_back(d);
  }
  return res;
}

double relative_entropy(const std::vector<double>& f, const std::vector<double>& M,
                        const std::vector<double>& weights) {
  if (f.size() != M.size() || f.size() != weights.size())
    throw Error(ErrorCode::InvalidParameters, "size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] < 0.0)
      throw Error(ErrorCode::NegativeDensity, fmt::format("f = {:.6g} at node {}", f[k], k));
    if (f[k] == 0.0) continue;
    if (!(M[k] > 0.0)) throw Error(ErrorCode::InvalidParameters, "reference must be positive");
    s += weights[k] * f[k] * std::log(f[k] / M[k]);
  }
  return s;
}

double relative_entropy(const std::vector<double>& f, const std::vector<double>& M, double weight) {
  return relative_entropy(f, M, std::vector<double>(f.size(), weight));
}

double relative_entropy(const MarginalEstimate& f, double beta) {
  if (f.order != 1) throw Error(ErrorCode::InvalidParameters, "order-1 marginal expected");
  std::vector<double> M(f.values.size());
  for (std::size_t k = 0; k < M.size(); ++k)
    M[k] = maxwellian(f.grid.cell(k).v_center(), f.grid.dim, beta);
  return relative_entropy(f.values, M, f.grid.cell_volume());
}

EntropyProductionEstimate entropy_production(const std::function<double(const Vec&)>& f,
                                             const EntropyProductionOptions& options, Rng& rng) {
  const int d = options.dim;
  const double bq = options.proposal_beta;
  if (!(bq > 0)) throw Error(ErrorCode::InvalidParameters, "proposal_beta must be positive");
  const double sigma = 1.0 / std::sqrt(bq);
  const double area = sphere_area(d);
  const std::size_t shards = std::min<std::size_t>(64, std::max<std::size_t>(options.samples, 1));
  std::vector<Rng> streams;
  for (std::size_t s = 0; s < shards; ++s) streams.push_back(split_stream(rng, s));
  std::vector<RunningStats> stats(shards);
  std::vector<std::size_t> skipped(shards, 0);
  parallel_for(shards, [&](std::size_t s) {
    const std::size_t count = options.samples / shards + (s < options.samples % shards ? 1 : 0);
    Rng& g = streams[s];
    for (std::size_t k = 0; k < count; ++k) {
      Vec v = gaussian_vec(g, d, sigma);
      Vec v1 = gaussian_vec(g, d, sigma);
      Vec nu = unit_vector(g, d);
      double x = 0.0;
      const double cross = dot(v - v1, nu);
      if (cross > 0.0) {
        auto [vp, v1p] = scatter(v, v1, nu);
        const double a = f(vp) * f(v1p);
        const double b = f(v) * f(v1);
        if (std::abs(a - b) <= options.equality_tolerance * std::max(a, b)) {
          x = 0.0;
        } else if (a <= 0.0 || b <= 0.0) {
          ++skipped[s];
        } else {
          const double q = maxwellian(v, d, bq) * maxwellian(v1, d, bq);
          x = 0.25 * area * (a - b) * std::log(a / b) * cross / q;
        }
      }
      stats[s].add(x);
    }
  });
  RunningStats total;
  std::size_t skip = 0;
  for (std::size_t s = 0; s < shards; ++s) {
    total.merge(stats[s]);
    skip += skipped[s];
  }
  return {total.mean, total.stderr_mean(), total.n, skip};
}

void write_marginal_csv(std::ostream& out, const MarginalEstimate& m) {
  const int d = m.grid.dim;
  auto cell_header = [&](const char* tag) {
    std::string h;
    for (int k = 1; k <= d; ++k) h += fmt::format("x{}_{},", tag, k);
    for (int k = 1; k <= d; ++k) h += fmt::format("v{}_{},", tag, k);
    return h;
  };
  auto cell_fields = [&](std::size_t idx) {
    PhaseCell c = m.grid.cell(idx);
    std::string s;
    for (int k = 0; k < d; ++k) s += fmt::format("{:.17g},", c.x_center()[k]);
    for (int k = 0; k < d; ++k) s += fmt::format("{:.17g},", c.v_center()[k]);
    return s;
  };
  if (m.order == 1) {
    out << cell_header("") << "value,stderr\n";
    for (std::size_t k = 0; k < m.values.size(); ++k)
      out << cell_fields(k) << fmt::format("{:.17g},{:.17g}\n", m.values[k], m.stderr[k]);
    return;
  }
  const std::size_t cc = m.grid.cell_count();
  out << cell_header("a") << cell_header("b") << "value,stderr\n";
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    if (m.values[k] == 0.0 && m.stderr[k] == 0.0) continue;
    out << cell_fields(k / cc) << cell_fields(k % cc)
        << fmt::format("{:.17g},{:.17g}\n", m.values[k], m.stderr[k]);
  }
}

void write_entropy_trace_csv(std::ostream& out, const EntropyTrace& trace) {
  out << "t,S,D,S_stderr,D_stderr\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    auto at = [&](const std::vector<double>& v) { return k < v.size() ? v[k] : 0.0; };
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", trace.times[k], at(trace.S),
                       at(trace.D), at(trace.S_stderr), at(trace.D_stderr));
  }
}

}  // namespace boltzgrad
