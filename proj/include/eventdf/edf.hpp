#ifndef EVENTDF_EDF_HPP
#define EVENTDF_EDF_HPP

#include <string>
#include <vector>

#include "eventdf/integrator.hpp"

namespace eventdf {

enum class LockClass { Locked11, PhaseSlip, HigherOrder, Suppressed };

const char* to_string(LockClass lock);

/// Periodic-drive steady-state measurement protocol.
struct SteadyStateProtocol {
  int n_transient = 10;        // discarded periods
  int n_window = 5;            // measured periods
  double delay_tol = 0.05;     // ms, max delay spread for a 1:1 verdict
  double flatness_tol = 0.05;  // ms, |delta - delta_inf| bound above T_r
  double start_offset = 5.0;   // ms before the first input event
  SimConfig sim;               // dt / threshold / refractory; t_end derived

  void validate() const;
};

struct EdfSample {
  double period = 0.0;  // T, ms
  double delta = 0.0;   // steady-state event delay, ms (Locked11 only)
  double phi = 0.0;     // delta / period (Locked11 only)
  LockClass lock = LockClass::Suppressed;
  bool failed = false;  // simulation failure, not a lock classification
  std::string fail_reason;
};

struct EdfCharacteristics {
  bool defined = false;
  double t_min = 0.0;     // smallest T of the contiguous top 1:1 region
  double t_r = 0.0;       // smallest T above which the delay is flat
  double delta_inf = 0.0; // resting-onset delay, ms
};

struct EdfCurve {
  std::vector<EdfSample> samples;  // ordered by period
  EdfCharacteristics characteristics;
};

/// Drives the node with a periodic train on synapse channel 0 (remaining
/// channels silent) and classifies the steady-state locking regime.
EdfSample steady_state_delay(const NodeConfig& config, double period,
                             const SteadyStateProtocol& protocol);

/// Delay of a single input event delivered to a node at rest.
double isolated_event_delay(const NodeConfig& config, const SimConfig& sim);

EdfCharacteristics extract_characteristics(const std::vector<EdfSample>& samples,
                                           double flatness_tol);

/// One steady_state_delay per grid point; per-sample failures are carried
/// as markers without aborting the sweep.
EdfCurve sweep_edf(const NodeConfig& config, const std::vector<double>& periods,
                   const SteadyStateProtocol& protocol, int jobs = 1);

enum class SweepParam { TauDecay, GbarSyn };

/// Independent eDF curves while varying one synapse-channel-0 parameter.
std::vector<std::pair<double, EdfCurve>> sweep_edf_parameters(
    const NodeConfig& base, SweepParam vary, const std::vector<double>& values,
    const std::vector<double>& periods, const SteadyStateProtocol& protocol,
    int jobs = 1);

}  // namespace eventdf

#endif
