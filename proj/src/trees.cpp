#include "boltzgrad/trees.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "boltzgrad/badsets.hpp"
#include "boltzgrad/parallel.hpp"
#include "boltzgrad/stats.hpp"

namespace boltzgrad {

const char* to_string(Variant v) { return v == Variant::Boltzmann ? "boltzmann" : "bbgky"; }

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Good: return "good";
    case Classification::Overlap: return "overlap";
    case Classification::Recollision: return "recollision";
  }
  return "?";
}

std::size_t tree_count(int n, int s) {
  std::size_t c = 1;
  for (int k = 0; k < s; ++k) c *= static_cast<std::size_t>(n + k);
  return c;
}

std::vector<CollisionTree> enumerate_trees(int n, int s) {
  if (n < 1 || s < 0) throw Error(ErrorCode::InvalidParameters, "need n >= 1, s >= 0");
  double count = 1.0;
  for (int k = 0; k < s; ++k) count *= n + k;
  if (count > 1e7) throw Error(ErrorCode::SizeLimit, fmt::format("{} trees", count));
  std::vector<CollisionTree> out;
  CollisionTree tree{n, s, std::vector<int>(s, 1)};
  for (;;) {
    out.push_back(tree);
    // Odometer over a[k] in {1, ..., n+k}, last position fastest.
    int k = s - 1;
    while (k >= 0 && tree.a[k] == n + k) tree.a[k--] = 1;
    if (k < 0) break;
    ++tree.a[k];
  }
  return out;
}

namespace {

std::vector<ParticleState> free_back(const std::vector<ParticleState>& Z, double dt) {
  std::vector<ParticleState> out;
  out.reserve(Z.size());
  for (const auto& z : Z) out.push_back(free_flight(z, -dt));
  return out;
}

}  // namespace

PseudoTrajectoryResult build_pseudo_trajectory(const CollisionTree& tree,
                                               const std::vector<ParticleState>& Z_n, double t,
                                               const TreeParameters& params,
                                               const PseudoTrajectoryOptions& options) {
  const int s = tree.s;
  if (static_cast<int>(params.times.size()) != s || static_cast<int>(params.nu.size()) != s ||
      static_cast<int>(params.v.size()) != s)
    throw Error(ErrorCode::InvalidParameters, "tree parameters do not match s");
  for (int k = 0; k < s; ++k) {
    double upper = k == 0 ? t : params.times[k - 1];
    if (!(params.times[k] < upper) || !(params.times[k] > 0))
      throw Error(ErrorCode::InvalidParameters, "creation times must decrease inside (0, t)");
  }
  const bool bbgky = options.variant == Variant::BBGKY;
  PseudoTrajectoryResult r;
  r.variant = options.variant;
  r.Z = Z_n;
  Configuration cfg;
  cfg.eps = options.eps;
  cfg.dim = options.dim;
  auto flow = [&](double dt) {
    if (dt <= 0) return;
    if (!bbgky) {
      r.Z = free_back(r.Z, dt);
      return;
    }
    cfg.particles = std::move(r.Z);
    auto sim = flow_backward_with_log(cfg, dt);
    if (!sim.log.events.empty()) r.classification = Classification::Recollision;
    r.Z = std::move(sim.final.particles);
  };
  double now = t;
  for (int k = 0; k < s; ++k) {
    flow(now - params.times[k]);
    now = params.times[k];
    const int parent = tree.a[k] - 1;
    if (parent < 0 || parent >= static_cast<int>(r.Z.size()))
      throw Error(ErrorCode::InvalidParameters, "tree label out of range");
    const Vec& nu = params.nu[k];
    ParticleState added{r.Z[parent].x, params.v[k]};
    if (bbgky) {
      added.x = wrap_position(r.Z[parent].x + options.eps * nu);
      for (std::size_t q = 0; q < r.Z.size(); ++q)
        if (static_cast<int>(q) != parent &&
            torus_distance(r.Z[q].x, added.x) < options.eps - kOverlapTolerance) {
          r.classification = Classification::Overlap;
          r.weight = 0.0;
          r.Z.push_back(added);
          return r;
        }
    }
    const double c = dot(params.v[k] - r.Z[parent].v, nu);
    r.weight *= c;
    if (c > 0) {
      auto [vp, vn] = scatter(r.Z[parent].v, params.v[k], nu);
      r.Z[parent].v = vp;
      added.v = vn;
    }
    r.Z.push_back(added);
  }
  flow(now);
  if (bbgky && options.good_horizon > 0 && r.classification == Classification::Good) {
    cfg.particles = r.Z;
    if (!flow_backward_with_log(cfg, options.good_horizon).log.events.empty())
      r.classification = Classification::Recollision;
  }
  return r;
}

namespace {

bool reduce(std::vector<ParticleState> Z, std::size_t n, double remaining, double eps,
            std::size_t& branches) {
  if (Z.size() <= n) return true;
  ++branches;
  double best = remaining;
  std::size_t bi = 0, bj = 0;
  Vec bnu;
  bool found = false;
  for (std::size_t i = 0; i < Z.size(); ++i)
    for (std::size_t j = i + 1; j < Z.size(); ++j) {
      auto c = pair_collision_time(Z[i], Z[j], eps, best);
      if (c.time && (!found || *c.time < best)) {
        best = *c.time;
        bi = i;
        bj = j;
        bnu = c.nu;
        found = true;
      }
    }
  if (!found || bj != Z.size() - 1) return false;
  for (auto& z : Z) z = free_flight(z, best);
  const ParticleState last = Z.back();
  Z.pop_back();
  // Loss: the partner keeps its velocity. Gain: it leaves with the scattered one.
  if (reduce(Z, n, remaining - best, eps, branches)) return true;
  Z[bi].v = scatter(Z[bi].v, last.v, bnu).first;
  return reduce(std::move(Z), n, remaining - best, eps, branches);
}

double max_speed(const std::vector<ParticleState>& Z) {
  double m = 0.0;
  for (const auto& z : Z) m = std::max(m, norm(z.v));
  return m;
}

}  // namespace

AdmissibleResult classify_admissible(const std::vector<ParticleState>& Z, int n, double T,
                                     double eps, int dim) {
  AdmissibleResult r;
  BadSetSpec spec{Z.size(), eps, max_speed(Z) + 1.0, T, Sign::Plus, dim};
  r.in_plus = in_bad_set(Z, spec);
  spec.sign = Sign::Minus;
  r.in_minus = in_bad_set(Z, spec);
  r.in_vplus = reduce(Z, static_cast<std::size_t>(n), T, eps, r.branches);
  return r;
}

double bbgky_prefactor(std::size_t N, int n, int s, double eps, int dim) {
  double c = 1.0;
  for (int k = 0; k < s; ++k)
    c *= (static_cast<double>(N) - n - k) * std::pow(eps, dim - 1);
  return c;
}

double sample_tree_parameters(int s, double t, int dim, double proposal_beta, Rng& rng,
                              TreeParameters& out) {
  out.times.resize(s);
  out.nu.resize(s);
  out.v.resize(s);
  for (auto& x : out.times) x = t * uniform01(rng);
  std::sort(out.times.begin(), out.times.end(), std::greater<>());
  const double sigma = 1.0 / std::sqrt(proposal_beta);
  double q = 1.0;
  for (int k = 0; k < s; ++k) {
    out.nu[k] = unit_vector(rng, dim);
    out.v[k] = gaussian_vec(rng, dim, sigma);
    q *= maxwellian(out.v[k], dim, proposal_beta) / sphere_area(dim);
  }
  return q;
}

SeriesEstimate evaluate_series_term(int n, int s, double t, const DensitySpec& f0,
                                    const std::vector<ParticleState>& Z_n,
                                    const SeriesOptions& options, Rng& rng) {
  if (static_cast<int>(Z_n.size()) != n) throw Error(ErrorCode::InvalidParameters, "|Z_n| != n");
  const bool bbgky = options.variant == Variant::BBGKY;
  PseudoTrajectoryOptions popt{options.variant, options.eps, options.dim, 0.0};
  auto f_product = [&](const std::vector<ParticleState>& Z) {
    double p = 1.0;
    for (const auto& z : Z) p *= f0(z.x, z.v);
    return p;
  };
  SeriesEstimate e;
  e.prefactor = bbgky && options.N > 0 ? bbgky_prefactor(options.N, n, s, options.eps, options.dim)
                                       : 1.0;
  if (s == 0) {
    auto r = build_pseudo_trajectory({n, 0, {}}, Z_n, t, {}, popt);
    e.uncorrected = f_product(r.Z);
    e.estimate = e.prefactor * e.uncorrected;
    e.recollision_fraction = r.classification == Classification::Good ? 0.0 : 1.0;
    e.samples = 1;
    return e;
  }
  const bool exhaustive = s <= options.exhaustive_up_to;
  const auto trees = exhaustive ? enumerate_trees(n, s) : std::vector<CollisionTree>{};
  const double count = static_cast<double>(tree_count(n, s));
  double jac = 1.0;
  for (int k = 1; k <= s; ++k) jac *= t / k;

  const std::size_t shards = std::min<std::size_t>(64, std::max<std::size_t>(options.samples, 1));
  std::vector<Rng> streams;
  for (std::size_t k = 0; k < shards; ++k) streams.push_back(split_stream(rng, k));
  std::vector<RunningStats> stats(shards);
  std::vector<std::size_t> bad(shards, 0), built(shards, 0);
  parallel_for(shards, [&](std::size_t sh) {
    const std::size_t m = options.samples / shards + (sh < options.samples % shards ? 1 : 0);
    Rng& g = streams[sh];
    TreeParameters params;
    for (std::size_t k = 0; k < m; ++k) {
      double q = sample_tree_parameters(s, t, options.dim, options.proposal_beta, g, params);
      if (!(q > 0))
        throw Error(ErrorCode::ProposalUnderflow, "proposal density vanished at a sample");
      double total = 0.0;
      const std::vector<Vec> drawn = params.nu;
      const unsigned masks = options.antithetic ? 1u << s : 1u;
      auto add = [&](const CollisionTree& tree, double mult) {
        for (unsigned mask = 0; mask < masks; ++mask) {
          for (int j = 0; j < s; ++j) params.nu[j] = (mask >> j) & 1u ? -drawn[j] : drawn[j];
          auto r = build_pseudo_trajectory(tree, Z_n, t, params, popt);
          ++built[sh];
          if (r.classification != Classification::Good) ++bad[sh];
          if (r.classification == Classification::Overlap) continue;
          total += mult * r.weight * f_product(r.Z) / masks;
        }
      };
      if (exhaustive) {
        for (const auto& tree : trees) add(tree, 1.0);
      } else {
        CollisionTree tree{n, s, std::vector<int>(s)};
        for (int j = 0; j < s; ++j)
          tree.a[j] = std::uniform_int_distribution<int>(1, n + j)(g);
        add(tree, count);
      }
      stats[sh].add(total * jac / q);
    }
  });
  RunningStats all;
  std::size_t nbad = 0, nbuilt = 0;
  for (std::size_t k = 0; k < shards; ++k) {
    all.merge(stats[k]);
    nbad += bad[k];
    nbuilt += built[k];
  }
  e.uncorrected = all.mean;
  e.uncorrected_stderr = all.stderr_mean();
  e.estimate = e.prefactor * e.uncorrected;
  e.stderr = std::abs(e.prefactor) * e.uncorrected_stderr;
  e.recollision_fraction = nbuilt ? static_cast<double>(nbad) / static_cast<double>(nbuilt) : 0.0;
  e.samples = all.n;
  return e;
}

double recollision_rate(int n, int s, double t, const std::vector<ParticleState>& Z_n,
                        const SeriesOptions& options, Rng& rng) {
  PseudoTrajectoryOptions popt{options.variant, options.eps, options.dim, 0.0};
  if (s == 0) {
    auto r = build_pseudo_trajectory({n, 0, {}}, Z_n, t, {}, popt);
    return r.classification == Classification::Good ? 0.0 : 1.0;
  }
  const std::size_t shards = std::min<std::size_t>(64, std::max<std::size_t>(options.samples, 1));
  std::vector<Rng> streams;
  for (std::size_t k = 0; k < shards; ++k) streams.push_back(split_stream(rng, k));
  std::vector<std::size_t> bad(shards, 0);
  parallel_for(shards, [&](std::size_t sh) {
    const std::size_t m = options.samples / shards + (sh < options.samples % shards ? 1 : 0);
    Rng& g = streams[sh];
    TreeParameters params;
    for (std::size_t k = 0; k < m; ++k) {
      CollisionTree tree{n, s, std::vector<int>(s)};
      for (int j = 0; j < s; ++j) tree.a[j] = std::uniform_int_distribution<int>(1, n + j)(g);
      sample_tree_parameters(s, t, options.dim, options.proposal_beta, g, params);
      auto r = build_pseudo_trajectory(tree, Z_n, t, params, popt);
      if (r.classification != Classification::Good) ++bad[sh];
    }
  });
  std::size_t total = 0;
  for (auto b : bad) total += b;
  return static_cast<double>(total) / static_cast<double>(options.samples);
}

void write_series_csv_header(std::ostream& out) {
  out << "n,s,t,variant,estimate,stderr,recollision_fraction,samples\n";
}

void write_series_csv_row(std::ostream& out, int n, int s, double t, const std::string& variant,
                          const SeriesEstimate& e) {
  out << fmt::format("{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{}\n", n, s, t, variant, e.estimate,
                     e.stderr, e.recollision_fraction, e.samples);
}

}  // namespace boltzgrad
