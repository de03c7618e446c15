#include "boltzgrad/hardsphere.hpp"

#include <fmt/format.h>

#include <deque>
#include <ostream>
#include <queue>

namespace boltzgrad {

namespace {

struct Pending {
  double time;
  int i, j;
  std::uint64_t ci, cj;  // collision counters at prediction time
};

struct Later {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

}  // namespace

SimulationResult simulate(const Configuration& config, double t_final,
                          const SimulationOptions& options) {
  if (!(t_final > 0.0))
    throw Error(ErrorCode::InvalidParameters, fmt::format("t_final = {} must be > 0", t_final));
  check_exclusion(config);

  const int n = static_cast<int>(config.particles.size());
  const double eps = config.eps;
  // Delayed update: particle k sits at x[k] at its own time stamp tp[k].
  std::vector<Vec> x(n), v(n);
  std::vector<double> tp(n, 0.0);
  std::vector<std::uint64_t> count(n, 0);
  for (int k = 0; k < n; ++k) {
    x[k] = config.particles[k].x;
    v[k] = config.particles[k].v;
  }
  auto position_at = [&](int k, double t) { return wrap_position(x[k] + (t - tp[k]) * v[k]); };

  std::priority_queue<Pending, std::vector<Pending>, Later> queue;
  double now = 0.0;
  auto predict = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    ParticleState zi{position_at(i, now), v[i]};
    ParticleState zj{position_at(j, now), v[j]};
    ContactResult c = pair_collision_time(zi, zj, eps, t_final - now);
    if (c.time) queue.push({now + *c.time, i, j, count[i], count[j]});
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) predict(i, j);

  SimulationResult result;
  EventLog& log = result.log;
  std::deque<double> recent;
  double t_end = t_final;

  while (!queue.empty()) {
    Pending e = queue.top();
    queue.pop();
    if (e.ci != count[e.i] || e.cj != count[e.j]) continue;
    if (e.time > t_final) break;
    now = std::max(now, e.time);
    const int i = e.i, j = e.j;
    x[i] = position_at(i, now);
    tp[i] = now;
    x[j] = position_at(j, now);
    tp[j] = now;

    Vec r = minimal_image(x[j], x[i]);
    CollisionEvent ev;
    ev.time = now;
    ev.i = i;
    ev.j = j;
    ev.nu = r / norm(r);
    ev.vi_pre = v[i];
    ev.vj_pre = v[j];
    if (std::abs(dot(v[i] - v[j], ev.nu)) < options.grazing_tolerance)
      log.flags |= static_cast<unsigned>(Pathology::GrazingWithinTolerance);
    auto [vi, vj] = scatter(v[i], v[j], ev.nu);
    v[i] = ev.vi_post = vi;
    v[j] = ev.vj_post = vj;
    ++count[i];
    ++count[j];
    if (!log.events.empty() && now - log.events.back().time <= options.simultaneous_tolerance)
      log.flags |= static_cast<unsigned>(Pathology::SimultaneousEvents);
    log.events.push_back(ev);

    recent.push_back(now);
    if (recent.size() > options.accumulation_events) {
      if (recent.back() - recent.front() <= options.accumulation_window) {
        log.flags |= static_cast<unsigned>(Pathology::EventAccumulation);
        log.t_final = now;
        result.final = config;
        for (int k = 0; k < n; ++k) result.final.particles[k] = {position_at(k, now), v[k]};
        throw SimulationAborted(
            fmt::format("{} events within {} time units at t = {}", recent.size(),
                        recent.back() - recent.front(), now),
            std::move(result));
      }
      recent.pop_front();
    }

    if (options.stop_after_events > 0 && log.events.size() >= options.stop_after_events) {
      t_end = now;
      break;
    }
    for (int k = 0; k < n; ++k) {
      if (k != i) predict(i, k);
      if (k != j && k != i) predict(j, k);
    }
  }
  log.t_final = t_end;
  result.final = config;
  for (int k = 0; k < n; ++k) result.final.particles[k] = {position_at(k, t_end), v[k]};
  return result;
}

Configuration reverse_velocities(Configuration config) {
  for (auto& p : config.particles) p.v = -p.v;
  return config;
}

SimulationResult flow_backward_with_log(const Configuration& config, double t,
                                        const SimulationOptions& options) {
  SimulationResult r = simulate(reverse_velocities(config), t, options);
  r.final = reverse_velocities(std::move(r.final));
  return r;
}

Configuration flow_backward(const Configuration& config, double t,
                            const SimulationOptions& options) {
  return flow_backward_with_log(config, t, options).final;
}

double min_pair_distance(const std::vector<ParticleState>& particles) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < particles.size(); ++i)
    for (std::size_t j = i + 1; j < particles.size(); ++j)
      best = std::min(best, torus_distance(particles[i].x, particles[j].x));
  return best;
}

void check_exclusion(const Configuration& config) {
  const auto& p = config.particles;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double d = torus_distance(p[i].x, p[j].x);
      if (d < config.eps - kOverlapTolerance)
        throw Error(ErrorCode::InitialOverlap,
                    fmt::format("particles {} and {} at distance {:.17g} < eps = {:.17g}", i, j,
                                d, config.eps));
    }
}

Vec total_momentum(const std::vector<ParticleState>& particles) {
  Vec p;
  for (const auto& z : particles) p += z.v;
  return p;
}

double total_energy(const std::vector<ParticleState>& particles) {
  double e = 0.0;
  for (const auto& z : particles) e += 0.5 * norm2(z.v);
  return e;
}

void write_event_log_csv(std::ostream& out, const EventLog& log, int dim) {
  out << "time,i,j";
  for (const char* block : {"nu", "vi_pre", "vj_pre", "vi_post", "vj_post"})
    for (int k = 1; k <= dim; ++k) out << ',' << block << '_' << k;
  out << '\n';
  for (const auto& e : log.events) {
    out << fmt::format("{:.17g},{},{}", e.time, e.i, e.j);
    for (const Vec* vec : {&e.nu, &e.vi_pre, &e.vj_pre, &e.vi_post, &e.vj_post})
      for (int k = 0; k < dim; ++k) out << fmt::format(",{:.17g}", (*vec)[k]);
    out << '\n';
  }
}

nlohmann::json configuration_to_json(const Configuration& config) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : config.particles) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < config.dim; ++k) row.push_back(p.x[k]);
    for (int k = 0; k < config.dim; ++k) row.push_back(p.v[k]);
    arr.push_back(std::move(row));
  }
  return arr;
}

Configuration configuration_from_json(const nlohmann::json& j, double eps, int dim) {
  Configuration c;
  c.eps = eps;
  c.dim = dim;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != 2 * dim)
      throw Error(ErrorCode::InvalidParameters, "configuration rows must hold 2*dim numbers");
    ParticleState z;
    for (int k = 0; k < dim; ++k) {
      z.x[k] = row[k].get<double>();
      z.v[k] = row[dim + k].get<double>();
    }
    z.x = wrap_position(z.x);
    c.particles.push_back(z);
  }
  return c;
}

}  // namespace boltzgrad
