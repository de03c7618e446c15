#include "boltzgrad/dsmc.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

std::vector<ParticleState> dsmc_initial(const DensitySpec& f0, std::size_t count, Rng& rng) {
  std::vector<ParticleState> p(count);
  for (auto& z : p) {
    z.x = sample_position(f0, rng);
    z.v = sample_velocity(f0, rng);
  }
  return p;
}

Vec sample_collision_direction(const Vec& w_hat, int dim, Rng& rng) {
  if (dim == 2) {
    double th = std::asin(2.0 * uniform01(rng) - 1.0);
    Vec perp{-w_hat[1], w_hat[0], 0.0};
    return std::cos(th) * w_hat + std::sin(th) * perp;
  }
  // Orthonormal frame around w_hat; cos(theta) = sqrt(U) gives density cos * sin.
  Vec a = std::abs(w_hat[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
  Vec e1 = a - dot(a, w_hat) * w_hat;
  e1 = e1 / norm(e1);
  Vec e2{w_hat[1] * e1[2] - w_hat[2] * e1[1], w_hat[2] * e1[0] - w_hat[0] * e1[2],
         w_hat[0] * e1[1] - w_hat[1] * e1[0]};
  double c = std::sqrt(uniform01(rng));
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double ph = 2.0 * std::numbers::pi * uniform01(rng);
  Vec nu = c * w_hat + (s * std::cos(ph)) * e1 + (s * std::sin(ph)) * e2;
  return nu / norm(nu);
}

namespace {

std::size_t cell_of(const Vec& x, int dim, int cells) {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) {
    int k = std::min(static_cast<int>(x[a] * cells), cells - 1);
    idx = idx * cells + static_cast<std::size_t>(k);
  }
  return idx;
}

}  // namespace

DsmcResult dsmc_run(std::vector<ParticleState> initial, const DsmcOptions& o, Rng& rng) {
  if (initial.size() < 2) throw Error(ErrorCode::InvalidParameters, "DSMC needs particles");
  if (!(o.dt > 0) || !(o.t_final >= 0) || o.cells_per_axis < 1)
    throw Error(ErrorCode::InvalidParameters, "bad DSMC time step or cell count");
  const int d = o.dim;
  std::size_t ncell = 1;
  for (int a = 0; a < d; ++a) ncell *= static_cast<std::size_t>(o.cells_per_axis);
  const double Vc = 1.0 / static_cast<double>(ncell);
  const double N = static_cast<double>(initial.size());
  const double cd = d == 2 ? 2.0 : std::numbers::pi;  // int (w_hat . nu)_+ dnu

  DsmcResult res;
  DsmcState& s = res.final;
  s.particles = std::move(initial);
  double vmax = 0.0;
  for (const auto& z : s.particles) vmax = std::max(vmax, norm(z.v));
  s.majorant.assign(ncell, o.initial_majorant > 0 ? o.initial_majorant : 2.0 * vmax);
  res.snapshots.push_back({0.0, s.particles});

  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(o.t_final / o.dt - 1e-9)));
  std::vector<std::vector<std::size_t>> members(ncell);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double h = std::min(o.dt, o.t_final - s.t);
    for (auto& z : s.particles) z = {wrap_position(z.x + h * z.v), z.v};
    for (auto& m : members) m.clear();
    for (std::size_t k = 0; k < s.particles.size(); ++k)
      members[cell_of(s.particles[k].x, d, o.cells_per_axis)].push_back(k);
    const std::uint64_t base = rng();
    for (std::size_t c = 0; c < ncell; ++c) {
      const auto& mem = members[c];
      const double nc = static_cast<double>(mem.size());
      if (mem.size() < 2) continue;
      Rng g = make_stream(base, stage_tag("dsmc-cell"), c);
      double& wmax = s.majorant[c];
      const double expected = 0.5 * nc * (nc - 1.0) * cd * wmax * h * o.collision_scale / (N * Vc);
      auto cand = static_cast<std::size_t>(expected);
      if (uniform01(g) < expected - static_cast<double>(cand)) ++cand;
      std::uniform_int_distribution<std::size_t> pick(0, mem.size() - 1);
      for (std::size_t k = 0; k < cand; ++k) {
        std::size_t a = pick(g), b = pick(g);
        while (b == a) b = pick(g);
        auto& za = s.particles[mem[a]];
        auto& zb = s.particles[mem[b]];
        Vec w = zb.v - za.v;
        double speed = norm(w);
        ++s.candidates;
        while (speed > wmax) {
          wmax *= 2.0;
          ++s.majorant_doublings;
          spdlog::info("DSMC cell {}: majorant doubled to {}", c, wmax);
        }
        if (speed == 0.0 || uniform01(g) * wmax >= speed) continue;
        Vec nu = sample_collision_direction(w / speed, d, g);
        auto [va, vb] = scatter(za.v, zb.v, nu);
        za.v = va;
        zb.v = vb;
        ++s.collisions;
      }
    }
    s.t = step == steps ? o.t_final : s.t + h;
    if (step % o.snapshot_every == 0 || step == steps) res.snapshots.push_back({s.t, s.particles});
  }
  return res;
}

ChiSquareResult velocity_chi_square(const std::vector<ParticleState>& particles, int dim,
                                    double beta, const Vec& mean, int bins, double R) {
  std::size_t cells = 1;
  for (int a = 0; a < dim; ++a) cells *= static_cast<std::size_t>(bins);
  const double hv = 2.0 * R / bins;
  const double sigma = 1.0 / std::sqrt(beta);
  std::vector<double> counts(cells, 0.0), probs(cells, 1.0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rem = c;
    for (int a = dim - 1; a >= 0; --a) {
      int k = static_cast<int>(rem % bins);
      rem /= bins;
      probs[c] *= gaussian_interval_probability(-R + k * hv, -R + (k + 1) * hv, mean[a], sigma);
    }
  }
  for (const auto& z : particles) {
    std::size_t idx = 0;
    bool inside = true;
    for (int a = 0; a < dim; ++a) {
      double s = (z.v[a] + R) / hv;
      if (s < 0 || s >= bins) {
        inside = false;
        break;
      }
      idx = idx * bins + static_cast<std::size_t>(s);
    }
    if (inside) counts[idx] += 1.0;
  }
  return chi_square_test(counts, probs, static_cast<double>(particles.size()));
}

double histogram_entropy(const std::vector<ParticleState>& particles, int dim, int bins, double R) {
  std::size_t cells = 1;
  for (int a = 0; a < dim; ++a) cells *= static_cast<std::size_t>(bins);
  const double hv = 2.0 * R / bins;
  const double vol = std::pow(hv, dim);
  std::vector<double> counts(cells, 0.0);
  for (const auto& z : particles) {
    std::size_t idx = 0;
    bool inside = true;
    for (int a = 0; a < dim; ++a) {
      double s = (z.v[a] + R) / hv;
      if (s < 0 || s >= bins) {
        inside = false;
        break;
      }
      idx = idx * bins + static_cast<std::size_t>(s);
    }
    if (inside) counts[idx] += 1.0;
  }
  const double N = static_cast<double>(particles.size());
  double S = 0.0;
  for (double c : counts)
    if (c > 0) S -= (c / N) * std::log(c / (N * vol));
  return S;
}

std::pair<double, Vec> moment_matched_beta(const std::vector<ParticleState>& particles, int dim) {
  Vec u;
  for (const auto& z : particles) u = u + z.v;
  u = u / static_cast<double>(particles.size());
  double s = 0.0;
  for (const auto& z : particles) s += norm2(z.v - u);
  return {dim * static_cast<double>(particles.size()) / s, u};
}

}  // namespace boltzgrad
