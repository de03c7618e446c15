#include "boltzgrad/badsets.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>

#include "boltzgrad/parallel.hpp"

namespace boltzgrad {

const char* to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

bool pair_in_bad_set(const Vec& r, const Vec& w, double eps0, double T) {
  const double reach = eps0 + kContactTolerance;
  const double ww = norm2(w);
  bool hit = false;
  for_each_segment_image(r, w, T, reach, [&](const Vec& k, double, double) {
    Vec p = r + k;
    double u = 0.0;
    if (ww > 0.0) u = std::clamp(-dot(p, w) / ww, 0.0, T);
    hit = norm2(p + u * w) <= reach * reach;
    return hit;
  });
  return hit;
}

namespace {

double max_speed(const std::vector<ParticleState>& Z) {
  double m = 0.0;
  for (const auto& z : Z) m = std::max(m, norm(z.v));
  return m;
}

struct Shard {
  Rng rng;
  std::size_t count;
};

std::vector<Shard> make_shards(std::size_t samples, Rng& rng) {
  const std::size_t shards = std::min<std::size_t>(64, std::max<std::size_t>(samples, 1));
  std::vector<Shard> out;
  for (std::size_t s = 0; s < shards; ++s)
    out.push_back({split_stream(rng, s), samples / shards + (s < samples % shards ? 1 : 0)});
  return out;
}

MeasureEstimate make_estimate(std::size_t hits, std::size_t samples, const BadSetSpec& spec) {
  MeasureEstimate e;
  e.samples = samples;
  e.spec = spec;
  e.fraction = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
  e.stderr = samples ? std::sqrt(e.fraction * (1.0 - e.fraction) / static_cast<double>(samples))
                     : 0.0;
  return e;
}

}  // namespace

bool in_bad_set(const std::vector<ParticleState>& Z, const BadSetSpec& spec) {
  for (const auto& z : Z)
    if (norm(z.v) > spec.R)
      throw Error(ErrorCode::VelocityOutOfRange,
                  fmt::format("|v| = {:.6g} exceeds R = {:.6g}", norm(z.v), spec.R));
  for (std::size_t i = 0; i < Z.size(); ++i)
    for (std::size_t j = i + 1; j < Z.size(); ++j) {
      Vec r = minimal_image(Z[i].x, Z[j].x);
      Vec w = Z[i].v - Z[j].v;
      if (spec.sign == Sign::Minus) w = -w;
      if (pair_in_bad_set(r, w, spec.eps0, spec.T)) return true;
    }
  return false;
}

std::vector<ParticleState> sample_uniform_configuration(const BadSetSpec& spec, Rng& rng) {
  std::vector<ParticleState> Z(spec.n);
  for (auto& z : Z) {
    z.x = uniform_position(rng, spec.dim);
    z.v = uniform_in_ball(rng, spec.dim, spec.R);
  }
  return Z;
}

MeasureEstimate estimate_measure(const BadSetSpec& spec, std::size_t samples, Rng& rng) {
  return estimate_measure_sweep(spec, {spec.eps0}, samples, rng).front();
}

std::vector<MeasureEstimate> estimate_measure_sweep(const BadSetSpec& base,
                                                    const std::vector<double>& eps0_list,
                                                    std::size_t samples, Rng& rng) {
  auto shards = make_shards(samples, rng);
  std::vector<std::vector<std::size_t>> hits(shards.size(),
                                             std::vector<std::size_t>(eps0_list.size(), 0));
  parallel_for(shards.size(), [&](std::size_t s) {
    BadSetSpec spec = base;
    for (std::size_t k = 0; k < shards[s].count; ++k) {
      auto Z = sample_uniform_configuration(base, shards[s].rng);
      for (std::size_t e = 0; e < eps0_list.size(); ++e) {
        spec.eps0 = eps0_list[e];
        hits[s][e] += in_bad_set(Z, spec);
      }
    }
  });
  std::vector<MeasureEstimate> out;
  for (std::size_t e = 0; e < eps0_list.size(); ++e) {
    std::size_t total = 0;
    for (const auto& h : hits) total += h[e];
    BadSetSpec spec = base;
    spec.eps0 = eps0_list[e];
    out.push_back(make_estimate(total, samples, spec));
  }
  return out;
}

MeasureEstimate estimate_intersection(const BadSetSpec& spec, std::size_t samples, Rng& rng) {
  auto shards = make_shards(samples, rng);
  std::vector<std::size_t> hits(shards.size(), 0);
  parallel_for(shards.size(), [&](std::size_t s) {
    BadSetSpec plus = spec, minus = spec;
    plus.sign = Sign::Plus;
    minus.sign = Sign::Minus;
    for (std::size_t k = 0; k < shards[s].count; ++k) {
      auto Z = sample_uniform_configuration(spec, shards[s].rng);
      hits[s] += in_bad_set(Z, plus) && in_bad_set(Z, minus);
    }
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return make_estimate(total, samples, spec);
}

MonotonicityResult monotonicity_check(const std::vector<double>& eps0_list,
                                      const BadSetSpec& base, std::size_t samples, Rng& rng) {
  MonotonicityResult out;
  for (double e0 : eps0_list) {
    BadSetSpec spec = base;
    spec.eps0 = e0;
    out.estimates.push_back(estimate_measure(spec, samples, rng));
  }
  for (std::size_t k = 1; k < out.estimates.size(); ++k) {
    const auto& a = out.estimates[k - 1];
    const auto& b = out.estimates[k];
    double tol = 3.0 * std::hypot(a.stderr, b.stderr);
    if (b.fraction < a.fraction - tol) out.pass = false;
  }
  return out;
}

RecollisionEstimate estimate_recollision_probability(const std::vector<ParticleState>& Z_k,
                                                     std::size_t m, double eps, double eps0,
                                                     double delta, double R, double t,
                                                     std::size_t samples, Rng& rng, int dim) {
  if (m >= Z_k.size()) throw Error(ErrorCode::InvalidParameters, "adjunction index out of range");
  if (!(delta < t)) throw Error(ErrorCode::InvalidParameters, "need delta < t");
  BadSetSpec base{Z_k.size(), eps0, std::max(R, max_speed(Z_k)), t, Sign::Minus, dim};
  if (in_bad_set(Z_k, base))
    throw Error(ErrorCode::BadBaseConfiguration, "base configuration lies in B^-_{eps0}");

  auto shards = make_shards(samples, rng);
  std::vector<std::size_t> recollide(shards.size(), 0), bad(shards.size(), 0);
  parallel_for(shards.size(), [&](std::size_t s) {
    Rng& g = shards[s].rng;
    for (std::size_t k = 0; k < shards[s].count; ++k) {
      Vec nu = unit_vector(g, dim);
      Vec v_new = uniform_in_ball(g, dim, R);
      Configuration c;
      c.eps = eps;
      c.dim = dim;
      c.particles = Z_k;
      ParticleState added{wrap_position(Z_k[m].x + eps * nu), v_new};
      if (dot(v_new - Z_k[m].v, nu) > 0.0) {
        auto [vm, vn] = scatter(Z_k[m].v, v_new, nu);
        c.particles[m].v = vm;
        added.v = vn;
      }
      bool overlap = false;
      for (std::size_t q = 0; q < Z_k.size(); ++q)
        if (q != m && torus_distance(Z_k[q].x, added.x) < eps - kOverlapTolerance) overlap = true;
      c.particles.push_back(added);
      bool rec = overlap || !flow_backward_with_log(c, t).log.events.empty();
      bool left = false;
      if (!rec) {
        std::vector<ParticleState> at_delta;
        double speed = 0.0;
        for (const auto& z : c.particles) {
          at_delta.push_back(free_flight(z, -delta));
          speed = std::max(speed, norm(z.v));
        }
        BadSetSpec good{at_delta.size(), 0.5 * eps0, speed + 1.0, t - delta, Sign::Minus, dim};
        left = in_bad_set(at_delta, good);
      }
      recollide[s] += rec;
      bad[s] += rec || left;
    }
  });
  std::size_t r = 0, b = 0;
  for (std::size_t s = 0; s < shards.size(); ++s) {
    r += recollide[s];
    b += bad[s];
  }
  BadSetSpec spec{Z_k.size() + 1, eps0, R, t, Sign::Minus, dim};
  return {make_estimate(r, samples, spec), make_estimate(b, samples, spec)};
}

void write_measure_csv_header(std::ostream& out) {
  out << "eps0,sign,n,R,T,fraction,stderr,samples\n";
}

void write_measure_csv_row(std::ostream& out, const MeasureEstimate& e) {
  out << fmt::format("{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", e.spec.eps0,
                     to_string(e.spec.sign), e.spec.n, e.spec.R, e.spec.T, e.fraction, e.stderr,
                     e.samples);
}

}  // namespace boltzgrad
