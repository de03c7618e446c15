#include "boltzgrad/torus.hpp"

#include <fmt/format.h>

#include <limits>

#include "boltzgrad/error.hpp"

namespace boltzgrad {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InitialOverlap: return "InitialOverlap";
    case ErrorCode::NonUnitNormal: return "NonUnitNormal";
    case ErrorCode::EventAccumulation: return "EventAccumulation";
    case ErrorCode::EnvelopeViolated: return "EnvelopeViolated";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::VelocityOutOfRange: return "VelocityOutOfRange";
    case ErrorCode::BadBaseConfiguration: return "BadBaseConfiguration";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::ProposalUnderflow: return "ProposalUnderflow";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Vec wrap_position(Vec x) {
  for (auto& c : x.c) {
    c -= std::floor(c);
    if (c >= 1.0) c = 0.0;  // -tiny rounds to 1.0
  }
  return x;
}

Vec minimal_image(const Vec& a, const Vec& b) {
  Vec d = a - b;
  for (auto& c : d.c) {
    c -= std::floor(c + 0.5);
    if (c >= 0.5) c -= 1.0;
  }
  return d;
}

double torus_distance(const Vec& a, const Vec& b) { return norm(minimal_image(a, b)); }

ParticleState free_flight(const ParticleState& z, double t) {
  return {wrap_position(z.x + t * z.v), z.v};
}

namespace {

// Entering root of |r + t w| = eps for one image, or +inf.
double entering_root(const Vec& r, const Vec& w, double eps) {
  const double a = norm2(w);
  const double b = dot(r, w);
  if (a == 0.0 || b >= 0.0) return std::numeric_limits<double>::infinity();
  const double c = norm2(r) - eps * eps;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  if (c <= 0.0) return 0.0;
  // Equivalent to (-b - sqrt(disc)) / a, without cancellation.
  return c / (-b + std::sqrt(disc));
}

void check_overlap(const Vec& r0, double eps) {
  double dist = norm(r0);
  if (dist < eps - kOverlapTolerance)
    throw Error(ErrorCode::InitialOverlap,
                fmt::format("pair distance {:.17g} below diameter {:.17g}", dist, eps));
}

ContactResult finish(const Vec& r0, const Vec& k, const Vec& w, double t) {
  ContactResult out;
  out.time = t;
  Vec at = r0 + k + t * w;
  out.nu = at / norm(at);
  return out;
}

}  // namespace

ContactResult pair_collision_time(const ParticleState& z1, const ParticleState& z2, double eps,
                                  double t_max) {
  const Vec r0 = minimal_image(z2.x, z1.x);
  check_overlap(r0, eps);
  const Vec w = z2.v - z1.v;
  double best = std::numeric_limits<double>::infinity();
  Vec best_k;
  for_each_segment_image(r0, w, t_max, eps, [&](const Vec& k, double, double u1) {
    double t = entering_root(r0 + k, w, eps);
    if (t < best) {
      best = t;
      best_k = k;
    }
    return best <= u1;
  });
  if (!(best <= t_max)) return {};
  return finish(r0, best_k, w, best);
}

ContactResult pair_collision_time_full_shell(const ParticleState& z1, const ParticleState& z2,
                                             double eps, double t_max, int dim) {
  const Vec r0 = minimal_image(z2.x, z1.x);
  check_overlap(r0, eps);
  const Vec w = z2.v - z1.v;
  const int K = static_cast<int>(std::ceil(norm(w) * t_max + 1.0));
  const int K2 = dim == 3 ? K : 0;
  double best = std::numeric_limits<double>::infinity();
  Vec best_k;
  for (int k0 = -K; k0 <= K; ++k0)
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K2; k2 <= K2; ++k2) {
        Vec k{double(k0), double(k1), double(k2)};
        double t = entering_root(r0 + k, w, eps);
        if (t < best) {
          best = t;
          best_k = k;
        }
      }
  if (!(best <= t_max)) return {};
  return finish(r0, best_k, w, best);
}

std::pair<Vec, Vec> scatter(const Vec& vi, const Vec& vj, const Vec& nu) {
  double n2 = norm2(nu);
  if (std::abs(std::sqrt(n2) - 1.0) > kUnitNormTolerance)
    throw Error(ErrorCode::NonUnitNormal, fmt::format("|nu| = {:.17g}", std::sqrt(n2)));
  const double p = dot(vi - vj, nu);
  return {vi - p * nu, vj + p * nu};
}

}  // namespace boltzgrad
