#ifndef EVENTDF_RING_HPP
#define EVENTDF_RING_HPP

#include <optional>
#include <string>
#include <vector>

#include "eventdf/eprc.hpp"

namespace eventdf {

/// Ring topology: node i's synapse channel 0 receives node i-1's output
/// events (cyclically), realized as the same square pulses used for
/// external inputs. The kickstart train is injected into one node to
/// initiate the rhythm.
struct RingSpec {
  std::vector<NodeConfig> nodes;
  EventTrain kickstart;  // its pulse shape also defines the coupling pulses
  int kick_node = 0;

  void validate() const;
};

struct RingResult {
  double period = 0.0;                      // measured network period, ms
  bool locked = false;
  std::vector<double> per_node_delays;      // steady-state edge delays, ms
  std::vector<std::vector<double>> rasters; // per-node output event times
  int n_cycles_measured = 0;
  std::string diagnostic;
};

struct PredictionResult {
  std::optional<double> t_star;  // predicted period, ms
  double residual = 0.0;         // |sum phi_i(t_star) - 1|
  bool unique = false;           // S strictly monotone over the common range
  std::string diagnostic;
};

struct EntrainmentReport {
  bool locked = false;
  std::optional<double> measured_lag;  // ms, in the ePRC t_p coordinate
  std::optional<double> drift_rate;    // ms per forcing cycle when unlocked
};

/// Solves sum_i phi_i(T) = 1 over the curves' common 1:1-locked range by
/// piecewise-linear interpolation and bisection.
PredictionResult predict_ring_period(const std::vector<EdfCurve>& curves);

/// Co-integrates all nodes with one global fixed step; events detected at
/// step k shape presynaptic inputs from step k+1 on.
RingResult simulate_ring(const RingSpec& spec, const SimConfig& sim);

/// Drives node 0 through an extra synapse with a periodic forcing train.
/// t_net is the known free-running period (from simulate_ring).
EntrainmentReport drive_ring(const RingSpec& spec, const SynapseParams& forcing,
                             double forcing_period, double t_net,
                             const SimConfig& sim);

/// Ring-context (FullOscillation) ePRC: a single perturbation event into
/// node 0 at offset t_p from its nominal input event; delta is the
/// asymptotic shift of node 0's output events relative to the unperturbed
/// run.
PrcCurve ring_eprc(const RingSpec& spec, const SynapseParams& perturbation,
                   const std::vector<double>& tp_grid, const SimConfig& sim,
                   int jobs = 1);

/// N identical nodes; the kickstart primes node 0 with two events spaced
/// by the expected period hint.
RingSpec make_homogeneous_ring(int n, const NodeConfig& node,
                               double period_hint);

}  // namespace eventdf

#endif
