#ifndef EVENTDF_EPRC_HPP
#define EVENTDF_EPRC_HPP

#include <optional>
#include <vector>

#include "eventdf/edf.hpp"

namespace eventdf {

enum class PrcMode { SingleEvent, FullOscillation };

/// Raised when a node fails the 1:1 locking precondition of an analysis.
class NotLockedError : public std::runtime_error {
 public:
  NotLockedError(LockClass lock, double period)
      : std::runtime_error(std::string("node not 1:1 locked at T=") +
                           std::to_string(period) + " (" + to_string(lock) + ")"),
        lock_(lock) {}
  LockClass lock() const { return lock_; }

 private:
  LockClass lock_;
};

struct PrcProtocol {
  double t_n = 100.0;  // nominal period, ms
  PrcMode mode = PrcMode::SingleEvent;
  // Applied through a second synapse channel. Weak by default: the
  // perturbation must stay subthreshold from rest or it adds events of
  // its own instead of shifting existing ones.
  SynapseParams perturbation = SynapseParams::excitatory(0.02);
  std::vector<double> tp_grid;      // ordered offsets, may be negative
  SteadyStateProtocol steady;

  static std::vector<double> default_grid(double t_n, double tp_min = -20.0,
                                          double step = 0.25);
};

struct PrcSample {
  double t_p = 0.0;
  double delta_shift = 0.0;  // positive = delay
  bool valid = false;
  LockClass fail_class = LockClass::Locked11;  // meaningful when !valid
};

struct NominalOscillation {
  double t_n = 0.0;
  double output_delay = 0.0;  // steady-state output time relative to the input event
};

struct PrcCurve {
  PrcProtocol protocol;
  NominalOscillation nominal;
  std::vector<PrcSample> samples;  // ordered by t_p
};

enum class Stability { Stable, Unstable, Marginal };

const char* to_string(Stability stability);

struct Equilibrium {
  double t_p_star = 0.0;
  double slope = 0.0;  // local d(delta)/d(t_p)
  Stability stability = Stability::Marginal;
  bool boundary = false;  // start of the terminal flat-zero region
};

/// Steady-state nominal oscillation of the node under periodic drive at t_n.
/// SingleEvent mode additionally requires the periodic delay to match the
/// isolated-event delay (the node fully recovers between events).
NominalOscillation nominal_oscillation(const NodeConfig& config, double t_n,
                                       PrcMode mode,
                                       const SteadyStateProtocol& steady);

/// Output time shift caused by a periodic perturbation at offset t_p from
/// each nominal input event.
PrcSample eprc_point(const NodeConfig& config, const PrcProtocol& protocol,
                     const NominalOscillation& nominal, double t_p);

PrcCurve sweep_eprc(const NodeConfig& config, const PrcProtocol& protocol,
                    int jobs = 1);

/// Zero crossings of delta(t_p) - delta_t with slope-based stability from
/// the cycle map t_p <- t_p + delta_t - delta(t_p): Stable iff slope in
/// (0, 2), Unstable iff slope < 0, Marginal otherwise. At delta_t = 0 the
/// terminal flat-zero region is reported as one boundary equilibrium.
std::vector<Equilibrium> find_equilibria(const PrcCurve& curve, double delta_t,
                                         double zero_tol = 0.02);

}  // namespace eventdf

#endif
