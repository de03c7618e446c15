#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <vector>

#include "boltzgrad/error.hpp"
#include "boltzgrad/torus.hpp"

namespace boltzgrad {

struct Configuration {
  std::vector<ParticleState> particles;
  double eps = 0.0;
  int dim = 2;
};

struct CollisionEvent {
  double time = 0.0;
  int i = 0;
  int j = 0;  ///< i < j
  Vec nu;     ///< from particle i toward particle j
  Vec vi_pre, vj_pre, vi_post, vj_post;
};

enum class Pathology : unsigned {
  GrazingWithinTolerance = 1u,
  SimultaneousEvents = 2u,
  EventAccumulation = 4u,
};

struct EventLog {
  std::vector<CollisionEvent> events;
  double t_final = 0.0;
  unsigned flags = 0;

  bool has(Pathology p) const { return (flags & static_cast<unsigned>(p)) != 0; }
};

struct SimulationOptions {
  std::size_t accumulation_events = 10000;  ///< K_max
  double accumulation_window = 1e-9;        ///< w_min
  /// Stop at the time of this event (0 = run to t_final); the returned
  /// configuration and log.t_final then refer to that event time.
  std::size_t stop_after_events = 0;
  double grazing_tolerance = 1e-9;
  double simultaneous_tolerance = 1e-12;
};

struct SimulationResult {
  Configuration final;
  EventLog log;
};

/// Thrown on EventAccumulation; carries everything computed before the abort.
class SimulationAborted : public Error {
 public:
  SimulationAborted(const std::string& what, SimulationResult partial)
      : Error(ErrorCode::EventAccumulation, what), partial_(std::move(partial)) {}
  const SimulationResult& partial() const { return partial_; }

 private:
  SimulationResult partial_;
};

SimulationResult simulate(const Configuration& config, double t_final,
                          const SimulationOptions& options = {});

Configuration reverse_velocities(Configuration config);

/// Backward hard-sphere flow by time t (t > 0).
SimulationResult flow_backward_with_log(const Configuration& config, double t,
                                        const SimulationOptions& options = {});
Configuration flow_backward(const Configuration& config, double t,
                            const SimulationOptions& options = {});

double min_pair_distance(const std::vector<ParticleState>& particles);
/// Throws InitialOverlap when some pair is closer than eps - kOverlapTolerance.
void check_exclusion(const Configuration& config);

Vec total_momentum(const std::vector<ParticleState>& particles);
double total_energy(const std::vector<ParticleState>& particles);

void write_event_log_csv(std::ostream& out, const EventLog& log, int dim);
nlohmann::json configuration_to_json(const Configuration& config);
Configuration configuration_from_json(const nlohmann::json& j, double eps, int dim);

}  // namespace boltzgrad
