#include "scenario_common.hpp"

#include <fmt/format.h>

#include <cmath>

#include "boltzgrad/error.hpp"
#include "boltzgrad/initial_data.hpp"
#include "boltzgrad/parallel.hpp"
#include "boltzgrad/stats.hpp"

namespace boltzgrad::experiments {

DensitySpec make_density(const ExperimentConfig& c) {
  const int d = static_cast<int>(c.num("dim"));
  const double beta = c.num("beta");
  if (c.physics.contains("density") && c.str("density") == "maxwellian")
    return DensitySpec::maxwellian(d, beta);
  return DensitySpec::two_bump(d, beta, c.num("shift"));
}

VelocityGrid make_grid(const ExperimentConfig& c) {
  VelocityGrid g;
  g.dim = static_cast<int>(c.num("dim"));
  g.n = static_cast<int>(c.count("grid_nodes"));
  g.v_cut = c.num("v_cut");
  return g;
}

CollisionOptions make_collision(const ExperimentConfig& c) {
  CollisionOptions o;
  o.angles = static_cast<int>(c.count("angles"));
  return o;
}

Rng stream(const ExperimentConfig& c, const char* stage, std::uint64_t index) {
  return make_stream(c.seed, stage_tag(stage), index);
}

double scaled_eps(double N, double N_eps, int dim) {
  return std::pow(N_eps / N, 1.0 / (dim - 1));
}

Ensemble sample_ensemble(const ExperimentConfig& c, const DensitySpec& f0, std::size_t N,
                         double eps, std::size_t replicas, const char* stage) {
  Ensemble e(replicas);
  const std::uint64_t tag = stage_tag(stage) ^ (static_cast<std::uint64_t>(N) << 32);
  parallel_for(replicas, [&](std::size_t r) {
    Rng g = make_stream(c.seed, tag, r);
    e[r] = sample_factorized(f0, N, eps, g);
  });
  return e;
}

Ensemble evolve(const Ensemble& e, double t) {
  Ensemble out(e.size());
  parallel_for(e.size(), [&](std::size_t r) { out[r] = simulate(e[r], t).final; });
  return out;
}

namespace {

std::optional<std::size_t> node_of(const Vec& v, const VelocityGrid& grid) {
  std::size_t idx = 0;
  for (int a = 0; a < grid.dim; ++a) {
    double s = (v[a] + grid.v_cut) / grid.h();
    if (s < 0 || s >= grid.n) return std::nullopt;
    idx = idx * grid.n + static_cast<std::size_t>(s);
  }
  return idx;
}

}  // namespace

std::vector<double> histogram_density(const Ensemble& e, const VelocityGrid& grid, double mix,
                                      double beta) {
  std::vector<double> f(grid.size(), 0.0);
  double total = 0.0;
  for (const auto& c : e)
    for (const auto& z : c.particles) {
      total += 1.0;
      if (auto k = node_of(z.v, grid)) f[*k] += 1.0;
    }
  if (total == 0.0) throw Error(ErrorCode::EmptyEnsemble, "no particles");
  const double w = grid.weight();
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = (1.0 - mix) * f[k] / (total * w) + mix * maxwellian(grid.node(k), grid.dim, beta);
  return f;
}

double histogram_grid_entropy(const Ensemble& e, const VelocityGrid& grid) {
  return grid_entropy(grid, histogram_density(e, grid, 0.0, 1.0));
}

CoarseDensity coarse_particle_density(const Ensemble& e, int bins, double v_cut, int dim) {
  if (e.empty()) throw Error(ErrorCode::EmptyEnsemble, "no replicas");
  CoarseDensity out;
  out.bins = bins;
  std::size_t cells = 1;
  for (int a = 0; a < dim; ++a) cells *= static_cast<std::size_t>(bins);
  const double hv = 2.0 * v_cut / bins;
  const double vol = std::pow(hv, dim);
  std::vector<RunningStats> st(cells);
  std::vector<double> counts(cells);
  for (const auto& c : e) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (const auto& z : c.particles) {
      std::size_t idx = 0;
      bool inside = true;
      for (int a = 0; a < dim && inside; ++a) {
        double s = (z.v[a] + v_cut) / hv;
        inside = s >= 0 && s < bins;
        if (inside) idx = idx * bins + static_cast<std::size_t>(s);
      }
      if (inside) counts[idx] += 1.0;
    }
    const double N = static_cast<double>(c.particles.size());
    for (std::size_t k = 0; k < cells; ++k) st[k].add(N > 0 ? counts[k] / N : 0.0);
  }
  for (std::size_t k = 0; k < cells; ++k) {
    Vec center;
    std::size_t rem = k;
    for (int a = dim - 1; a >= 0; --a) {
      center[a] = -v_cut + (static_cast<double>(rem % bins) + 0.5) * hv;
      rem /= bins;
    }
    out.centers.push_back(center);
    out.value.push_back(st[k].mean / vol);
    out.stderr.push_back(st[k].stderr_mean() / vol);
  }
  return out;
}

CoarseDensity coarse_grid_density(const VelocityGrid& grid, const std::vector<double>& f, int bins) {
  if (grid.n % bins != 0)
    throw Error(ErrorCode::InvalidParameters, "grid nodes must be a multiple of the coarse bins");
  const int per = grid.n / bins;
  CoarseDensity out;
  out.bins = bins;
  std::size_t cells = 1;
  for (int a = 0; a < grid.dim; ++a) cells *= static_cast<std::size_t>(bins);
  out.value.assign(cells, 0.0);
  out.stderr.assign(cells, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rem = i, cell = 0, mult = 1;
    for (int a = grid.dim - 1; a >= 0; --a) {
      cell += mult * ((rem % grid.n) / per);
      rem /= grid.n;
      mult *= bins;
    }
    out.value[cell] += f[i];
  }
  const double hv = 2.0 * grid.v_cut / bins;
  for (std::size_t k = 0; k < cells; ++k) {
    out.value[k] /= std::pow(per, grid.dim);
    Vec center;
    std::size_t rem = k;
    for (int a = grid.dim - 1; a >= 0; --a) {
      center[a] = -grid.v_cut + (static_cast<double>(rem % bins) + 0.5) * hv;
      rem /= bins;
    }
    out.centers.push_back(center);
  }
  return out;
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

}  // namespace boltzgrad::experiments
