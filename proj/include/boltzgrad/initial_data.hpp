#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "boltzgrad/cells.hpp"
#include "boltzgrad/density.hpp"
#include "boltzgrad/hardsphere.hpp"

namespace boltzgrad {

enum class SamplerMethod { GlobalRejection, MarkovChain };

struct FactorizedOptions {
  SamplerMethod method = SamplerMethod::GlobalRejection;
  std::size_t max_attempts = 1'000'000;
  std::size_t burn_in_sweeps_per_particle = 100;  ///< Markov chain burn-in = this * N sweeps
};

/// N particles with density proportional to prod f0(z_i) prod 1{|x_i - x_j| > eps}.
Configuration sample_factorized(const DensitySpec& spec, std::size_t N, double eps, Rng& rng,
                                const FactorizedOptions& options = {});

struct PartitionEstimate {
  double estimate = 0.0;
  double stderr = 0.0;
  std::size_t samples = 0;
};

/// Acceptance frequency of iid proposals = Z_N relative to the unconstrained product.
PartitionEstimate estimate_partition_function(const DensitySpec& spec, std::size_t N, double eps,
                                              std::size_t samples, Rng& rng);

struct ConditioningSpec {
  double delta = 0.05;  ///< collision-free horizon
};

struct GrandCanonicalSample {
  std::size_t n = 0;
  Configuration config;
  std::size_t accepted_after = 0;  ///< rejected proposals before acceptance
};

struct GrandCanonicalOptions {
  std::size_t max_attempts = 100'000'000;
};

/// Activity mu_eps = eps^{-(d-1)}.
double activity(double eps, int dim);

/// Poisson(mu_eps) particle number (truncated at mu + 10 sqrt(mu)), iid points
/// from f0, accepted iff exclusion holds and, when conditioned, no pair reaches
/// contact under the forward flow on [0, delta].
GrandCanonicalSample sample_grand_canonical(const DensitySpec& spec, double eps,
                                            const std::optional<ConditioningSpec>& conditioning,
                                            Rng& rng, const GrandCanonicalOptions& options = {});

/// Fixed-N variant of the conditioned state: factorized sampling, then
/// rejection unless the forward flow is collision free on [0, delta].
Configuration sample_conditioned_factorized(const DensitySpec& spec, std::size_t N, double eps,
                                            const ConditioningSpec& conditioning, Rng& rng,
                                            std::size_t max_attempts = 1'000'000);

/// True when no pair of the configuration reaches contact within [0, horizon].
bool collision_free(const std::vector<ParticleState>& particles, double eps, double horizon);

struct CellEstimate {
  double value = 0.0;
  double stderr = 0.0;
};

/// Rescaled correlation functions mu^{-j} rho^{(j)} averaged over cells
/// (j = 1) or over ordered pairs of cells (j = 2).
std::vector<CellEstimate> estimate_correlation(const std::vector<GrandCanonicalSample>& samples,
                                               const std::vector<PhaseCell>& cells, double mu);
std::vector<CellEstimate> estimate_correlation(const std::vector<GrandCanonicalSample>& samples,
                                               const std::vector<CellPair>& cells, double mu);

}  // namespace boltzgrad
