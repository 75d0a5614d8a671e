#ifndef EVENTDF_SYNAPSE_HPP
#define EVENTDF_SYNAPSE_HPP

#include <cmath>
#include <stdexcept>

namespace eventdf {

enum class Polarity { Excitatory, Inhibitory };

/// Conductance synapse with first-order activation kinetics:
///   g_syn = gbar_syn * h,  dh/dt = alpha (1-h) sigma(V_pre) - beta h
/// with beta = 1/tau_decay and alpha = 1/tau_rise - beta.
struct SynapseParams {
  double gbar_syn = 2.0;   // mS/cm^2
  double e_syn = -100.0;   // mV
  double tau_rise = 0.5;   // ms
  double tau_decay = 10.0; // ms
  double v_th = 0.0;       // mV, sigmoid half-activation
  double k_slope = 2.0;    // mV

  static SynapseParams excitatory(double gbar = 2.0) {
    SynapseParams p;
    p.gbar_syn = gbar;
    p.e_syn = 0.0;
    return p;
  }

  static SynapseParams inhibitory(double gbar = 2.0) {
    SynapseParams p;
    p.gbar_syn = gbar;
    p.e_syn = -100.0;
    return p;
  }

  double beta() const { return 1.0 / tau_decay; }
  double alpha() const { return 1.0 / tau_rise - beta(); }

  void validate() const {
    if (!(tau_rise > 0.0 && tau_rise < tau_decay))
      throw std::invalid_argument("requires 0 < tau_rise < tau_decay");
    if (gbar_syn < 0.0) throw std::invalid_argument("gbar_syn must be non-negative");
    if (k_slope <= 0.0) throw std::invalid_argument("k_slope must be positive");
  }
};

/// dh/dt of the synaptic activation for presynaptic voltage v_pre.
inline double synapse_activation_rhs(const SynapseParams& p, double h, double v_pre) {
  double gate = 1.0 / (1.0 + std::exp(-(v_pre - p.v_th) / p.k_slope));
  return p.alpha() * (1.0 - h) * gate - p.beta() * h;
}

}  // namespace eventdf

#endif
