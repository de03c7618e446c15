#include "boltzgrad/initial_data.hpp"

#include <fmt/format.h>

#include <cmath>

#include "boltzgrad/stats.hpp"

namespace boltzgrad {

namespace {

ParticleState draw_point(const DensitySpec& spec, Rng& rng) {
  ParticleState z;
  z.x = sample_position(spec, rng);
  z.v = sample_velocity(spec, rng);
  return z;
}

bool clear_of(const std::vector<ParticleState>& placed, const Vec& x, double eps,
              std::size_t skip = static_cast<std::size_t>(-1)) {
  for (std::size_t k = 0; k < placed.size(); ++k)
    if (k != skip && torus_distance(placed[k].x, x) <= eps) return false;
  return true;
}

// Exact rejection over iid proposals; stops drawing at the first violation.
bool try_factorized(const DensitySpec& spec, std::size_t N, double eps, Rng& rng,
                    std::vector<ParticleState>& out) {
  out.clear();
  for (std::size_t k = 0; k < N; ++k) {
    ParticleState z = draw_point(spec, rng);
    if (!clear_of(out, z.x, eps)) return false;
    out.push_back(z);
  }
  return true;
}

Configuration markov_chain(const DensitySpec& spec, std::size_t N, double eps, Rng& rng,
                           const FactorizedOptions& options) {
  Configuration c;
  c.eps = eps;
  c.dim = spec.dim;
  auto& p = c.particles;
  // Random sequential insertion gives an admissible starting point.
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t tries = 0;
    Vec x;
    do {
      if (++tries > options.max_attempts)
        throw Error(ErrorCode::RejectionBudgetExceeded, "Markov chain start: packing too dense");
      x = sample_position(spec, rng);
    } while (!clear_of(p, x, eps));
    p.push_back({x, sample_velocity(spec, rng)});
  }
  const std::size_t sweeps = options.burn_in_sweeps_per_particle * N;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t k = 0; k < N; ++k) {
      Vec x = uniform_position(rng, spec.dim);
      double ratio = spec.spatial_density(x) / spec.spatial_density(p[k].x);
      if (uniform01(rng) >= ratio) continue;
      if (clear_of(p, x, eps, k)) p[k].x = x;
    }
  }
  return c;
}

}  // namespace

Configuration sample_factorized(const DensitySpec& spec, std::size_t N, double eps, Rng& rng,
                                const FactorizedOptions& options) {
  if (N == 0) throw Error(ErrorCode::InvalidParameters, "N must be >= 1");
  if (options.method == SamplerMethod::MarkovChain) return markov_chain(spec, N, eps, rng, options);
  Configuration c;
  c.eps = eps;
  c.dim = spec.dim;
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt)
    if (try_factorized(spec, N, eps, rng, c.particles)) return c;
  throw Error(ErrorCode::RejectionBudgetExceeded,
              fmt::format("no admissible configuration of {} particles in {} attempts", N,
                          options.max_attempts));
}

PartitionEstimate estimate_partition_function(const DensitySpec& spec, std::size_t N, double eps,
                                              std::size_t samples, Rng& rng) {
  std::size_t accepted = 0;
  std::vector<ParticleState> buf;
  for (std::size_t s = 0; s < samples; ++s)
    if (try_factorized(spec, N, eps, rng, buf)) ++accepted;
  PartitionEstimate e;
  e.samples = samples;
  e.estimate = static_cast<double>(accepted) / static_cast<double>(samples);
  e.stderr = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
  return e;
}

double activity(double eps, int dim) { return std::pow(eps, -(dim - 1)); }

bool collision_free(const std::vector<ParticleState>& particles, double eps, double horizon) {
  for (std::size_t i = 0; i < particles.size(); ++i)
    for (std::size_t j = i + 1; j < particles.size(); ++j)
      if (pair_collision_time(particles[i], particles[j], eps, horizon).time) return false;
  return true;
}

GrandCanonicalSample sample_grand_canonical(const DensitySpec& spec, double eps,
                                            const std::optional<ConditioningSpec>& conditioning,
                                            Rng& rng, const GrandCanonicalOptions& options) {
  const double mu = activity(eps, spec.dim);
  const auto n_max = static_cast<std::size_t>(std::floor(mu + 10.0 * std::sqrt(mu)));
  std::poisson_distribution<std::size_t> poisson(mu);
  GrandCanonicalSample out;
  out.config.eps = eps;
  out.config.dim = spec.dim;
  auto& p = out.config.particles;
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::size_t n = poisson(rng);
    if (n > n_max) {
      ++out.accepted_after;
      continue;
    }
    p.clear();
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      ParticleState z = draw_point(spec, rng);
      for (const auto& q : p) {
        if (torus_distance(q.x, z.x) <= eps ||
            (conditioning && pair_collision_time(q, z, eps, conditioning->delta).time)) {
          ok = false;
          break;
        }
      }
      p.push_back(z);
    }
    if (ok) {
      out.n = n;
      return out;
    }
    ++out.accepted_after;
  }
  throw Error(ErrorCode::RejectionBudgetExceeded,
              fmt::format("grand canonical sampler: {} proposals rejected", options.max_attempts));
}

Configuration sample_conditioned_factorized(const DensitySpec& spec, std::size_t N, double eps,
                                            const ConditioningSpec& conditioning, Rng& rng,
                                            std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Configuration c;
    c.eps = eps;
    c.dim = spec.dim;
    if (!try_factorized(spec, N, eps, rng, c.particles)) continue;
    if (collision_free(c.particles, eps, conditioning.delta)) return c;
  }
  throw Error(ErrorCode::RejectionBudgetExceeded,
              fmt::format("conditioned factorized sampler: {} proposals rejected", max_attempts));
}

std::vector<CellEstimate> estimate_correlation(const std::vector<GrandCanonicalSample>& samples,
                                               const std::vector<PhaseCell>& cells, double mu) {
  if (samples.empty()) throw Error(ErrorCode::EmptyEnsemble, "no samples");
  std::vector<CellEstimate> out;
  for (const auto& cell : cells) {
    RunningStats st;
    for (const auto& s : samples) {
      double a = 0;
      for (const auto& z : s.config.particles) a += cell.contains(z) ? 1.0 : 0.0;
      st.add(a);
    }
    double scale = 1.0 / (mu * cell.volume());
    out.push_back({st.mean * scale, st.stderr_mean() * scale});
  }
  return out;
}

std::vector<CellEstimate> estimate_correlation(const std::vector<GrandCanonicalSample>& samples,
                                               const std::vector<CellPair>& cells, double mu) {
  if (samples.empty()) throw Error(ErrorCode::EmptyEnsemble, "no samples");
  std::vector<CellEstimate> out;
  for (const auto& [A, B] : cells) {
    RunningStats st;
    for (const auto& s : samples) {
      double a = 0, b = 0, both = 0;
      for (const auto& z : s.config.particles) {
        bool inA = A.contains(z), inB = B.contains(z);
        a += inA;
        b += inB;
        both += inA && inB;
      }
      st.add(a * b - both);  // ordered pairs of distinct particles
    }
    double scale = 1.0 / (mu * mu * A.volume() * B.volume());
    out.push_back({st.mean * scale, st.stderr_mean() * scale});
  }
  return out;
}

}  // namespace boltzgrad
