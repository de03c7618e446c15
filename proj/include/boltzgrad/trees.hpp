#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "boltzgrad/density.hpp"
#include "boltzgrad/hardsphere.hpp"
#include "boltzgrad/rng.hpp"

namespace boltzgrad {

/// Particle n+1+k attaches to a[k] in {1, ..., n+k} (labels are 1-based).
struct CollisionTree {
  int n = 1;
  int s = 0;
  std::vector<int> a;
};

/// n (n+1) ... (n+s-1); 1 for s = 0.
std::size_t tree_count(int n, int s);

/// All trees in lexicographic order of a. SizeLimit above 1e7 trees.
std::vector<CollisionTree> enumerate_trees(int n, int s);

/// Creation times t_{n+1} > ... > t_{n+s} in (0, t), impact directions and
/// velocities of the added particles.
struct TreeParameters {
  std::vector<double> times;
  std::vector<Vec> nu;
  std::vector<Vec> v;
};

enum class Variant { Boltzmann, BBGKY };
enum class Classification { Good, Overlap, Recollision };

const char* to_string(Variant v);
const char* to_string(Classification c);

struct PseudoTrajectoryOptions {
  Variant variant = Variant::Boltzmann;
  double eps = 0.0;  ///< BBGKY particle diameter
  int dim = 2;
  /// BBGKY only: after reaching time 0 keep flowing backward this long; any
  /// event there also counts as Recollision.
  double good_horizon = 0.0;
};

struct PseudoTrajectoryResult {
  std::vector<ParticleState> Z;  ///< configuration at time 0
  Classification classification = Classification::Good;
  Variant variant = Variant::Boltzmann;
  double weight = 1.0;  ///< prod (v_i - v_{a(i)}(t_i)) . nu_i
};

/// Backward construction from Z_n at time t down to 0. Overlap returns early
/// with weight 0 and the configuration at the failed adjunction.
PseudoTrajectoryResult build_pseudo_trajectory(const CollisionTree& tree,
                                               const std::vector<ParticleState>& Z_n, double t,
                                               const TreeParameters& params,
                                               const PseudoTrajectoryOptions& options);

struct AdmissibleResult {
  bool in_vplus = false;
  bool in_plus = false;   ///< Z in B^{+} (eps, T)
  bool in_minus = false;  ///< Z in B^{-} (eps, T)
  std::size_t branches = 0;  ///< gain/loss histories explored
};

/// Forward search for a history in which each contact removes the highest
/// remaining label, continuing its partner with either the scattered
/// (gain) or the unchanged (loss) velocity, until n particles remain
/// before time T.
AdmissibleResult classify_admissible(const std::vector<ParticleState>& Z, int n, double T,
                                     double eps, int dim = 2);

struct SeriesOptions {
  Variant variant = Variant::Boltzmann;
  double eps = 0.0;
  std::size_t N = 0;  ///< BBGKY particle number for the prefactor; 0 = uncorrected
  std::size_t samples = 10000;
  double proposal_beta = 0.5;
  int dim = 2;
  int exhaustive_up_to = 4;  ///< larger s samples one tree uniformly
  /// Average each draw over all sign flips nu_i -> -nu_i (2^s trajectories).
  bool antithetic = true;
};

struct SeriesEstimate {
  double estimate = 0.0;  ///< with C^{(N,n,s)} for BBGKY
  double stderr = 0.0;
  double uncorrected = 0.0;
  double uncorrected_stderr = 0.0;
  double prefactor = 1.0;
  double recollision_fraction = 0.0;  ///< Recollision or Overlap
  std::size_t samples = 0;
};

/// (N - n)(N - n - 1) ... (N - n - s + 1) eps^{s(d-1)}.
double bbgky_prefactor(std::size_t N, int n, int s, double eps, int dim);

/// Monte Carlo estimate of the s-th Duhamel term at Z_n.
SeriesEstimate evaluate_series_term(int n, int s, double t, const DensitySpec& f0,
                                    const std::vector<ParticleState>& Z_n,
                                    const SeriesOptions& options, Rng& rng);

/// Draws parameters for one sample: sorted times, uniform directions,
/// Gaussian velocities. Returns the proposal density of the draw (times
/// excluded).
double sample_tree_parameters(int s, double t, int dim, double proposal_beta, Rng& rng,
                              TreeParameters& out);

/// Fraction of BBGKY samples (uniform tree, proposal parameters) classified
/// Recollision or Overlap; exactly 0 for the Boltzmann variant.
double recollision_rate(int n, int s, double t, const std::vector<ParticleState>& Z_n,
                        const SeriesOptions& options, Rng& rng);

void write_series_csv_header(std::ostream& out);
void write_series_csv_row(std::ostream& out, int n, int s, double t, const std::string& variant,
                          const SeriesEstimate& e);

}  // namespace boltzgrad
