#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "boltzgrad/cells.hpp"
#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/rng.hpp"
#include "boltzgrad/velocity_grid.hpp"

namespace boltzgrad {

using Ensemble = std::vector<Configuration>;

struct MarginalOptions {
  /// Count every particle (order 1) or every ordered pair (order 2) instead
  /// of particle 1 / the pair (1,2) only.
  bool symmetrized = true;
};

struct MarginalEstimate {
  int order = 1;
  PhaseCellGrid grid;
  std::vector<double> values;  ///< order 2: index a * cell_count + b
  std::vector<double> stderr;
};

/// Histogram density of the order-1 or order-2 marginal. Order 2 on the full
/// grid needs cell_count^2 <= 4e6 (SizeLimit otherwise); use
/// estimate_pair_marginal for selected cell pairs.
MarginalEstimate estimate_marginal(const Ensemble& ensemble, int order, const PhaseCellGrid& grid,
                                   const MarginalOptions& options = {});

struct PairValue {
  double value = 0.0;
  double stderr = 0.0;
};

std::vector<PairValue> estimate_pair_marginal(const Ensemble& ensemble,
                                              const std::vector<CellPair>& pairs,
                                              const MarginalOptions& options = {});

/// How counts become densities: marginals divide by N and N(N-1) (fixed N);
/// rescaled correlation functions divide by mu and mu^2 (grand canonical).
struct DefectNormalization {
  enum Kind { Marginal, Correlation } kind = Marginal;
  double mu = 0.0;
};

struct DefectEstimate {
  double f2 = 0.0;
  double f1a = 0.0;
  double f1b = 0.0;
  double defect = 0.0;  ///< f2 - f1a f1b
  double stderr = 0.0;  ///< delta method over replicas
};

struct ChaosDefectResult {
  std::vector<DefectEstimate> pairs;
  std::size_t argmax = 0;  ///< pair with the largest |defect|
  double max_abs = 0.0;
  double max_stderr = 0.0;
};

/// Symmetrized counting over all particles and ordered pairs of each replica.
ChaosDefectResult chaos_defect(const Ensemble& ensemble, const std::vector<CellPair>& pairs,
                               const DefectNormalization& normalization = {});

/// sum w f log(f/M) with 0 log 0 = 0 and f = 0 < M contributing 0.
/// Throws NegativeDensity if some f < 0.
double relative_entropy(const std::vector<double>& f, const std::vector<double>& M,
                        const std::vector<double>& weights);
double relative_entropy(const std::vector<double>& f, const std::vector<double>& M, double weight);
/// Phase-space marginal against a spatially uniform Maxwellian, evaluated at
/// cell centres.
double relative_entropy(const MarginalEstimate& f, double beta);

struct EntropyProductionOptions {
  std::size_t samples = 100000;
  double proposal_beta = 0.5;  ///< Gaussian proposal inverse temperature
  int dim = 2;
  /// |a - b| <= this * max(a, b) contributes exactly 0, so f'f1' = ff1 gives 0.
  double equality_tolerance = 1e-12;
};

struct EntropyProductionEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::size_t samples = 0;
  std::size_t zero_density_skipped = 0;
};

/// Importance-sampled (1/4) int (f'f1' - f f1) log(f'f1' / f f1) ((v - v1).nu)_+.
EntropyProductionEstimate entropy_production(const std::function<double(const Vec&)>& f,
                                             const EntropyProductionOptions& options, Rng& rng);

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> S;
  std::vector<double> D;
  std::vector<double> S_stderr;
  std::vector<double> D_stderr;
};

void write_marginal_csv(std::ostream& out, const MarginalEstimate& m);
void write_entropy_trace_csv(std::ostream& out, const EntropyTrace& trace);

}  // namespace boltzgrad
