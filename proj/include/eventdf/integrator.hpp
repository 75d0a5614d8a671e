#ifndef EVENTDF_INTEGRATOR_HPP
#define EVENTDF_INTEGRATOR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eventdf/event_train.hpp"
#include "eventdf/node.hpp"

namespace eventdf {

struct SimConfig {
  double dt = 0.01;              // ms
  double t_end = 500.0;          // ms
  double spike_threshold = 0.0;  // mV, upward crossing
  double refractory_min = 5.0;   // ms, minimum inter-event gap
  bool record_trace = false;

  void validate() const {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
  }
};

/// Dense state recording on the integration grid.
struct Trace {
  std::vector<double> times;
  std::vector<std::string> labels;                // per state variable
  std::vector<std::vector<double>> values;        // values[var][step]
};

struct SimOutput {
  std::vector<double> events;  // detected output event times, ms
  std::optional<Trace> trace;
  bool suppressed = false;     // no output events at all
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Classical RK4 at fixed dt with threshold-crossing event detection.
/// Crossing times are refined by linear interpolation between the
/// bracketing steps; crossings within refractory_min of the previous
/// event are discarded. Starts from rest unless `initial` is given.
SimOutput simulate_node(const NodeConfig& config,
                        const std::vector<EventTrain>& inputs, const SimConfig& sim,
                        const Eigen::VectorXd* initial = nullptr);

struct ConvergenceReport {
  bool event_counts_match = false;
  std::size_t count_coarse = 0;
  std::size_t count_fine = 0;
  double max_deviation = 0.0;  // ms, over matched events
};

/// Re-runs the scenario at dt and dt/2 and reports the worst event-time
/// deviation; a count mismatch marks a non-convergent regime.
ConvergenceReport convergence_check(const NodeConfig& config,
                                    const std::vector<EventTrain>& inputs,
                                    const SimConfig& sim);

/// Trace CSV: header `t,V,m,h,n,h_syn_0[,...]`, one row per grid point.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace eventdf

#endif
