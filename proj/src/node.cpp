#include "eventdf/node.hpp"

#include <cmath>

namespace eventdf {

void membrane_rhs(const NodeConfig& config, const Eigen::VectorXd& state,
                  const Eigen::VectorXd& v_pre, Eigen::VectorXd& dxdt) {
  const auto n_syn = static_cast<Eigen::Index>(config.synapses.size());
  if (v_pre.size() != n_syn)
    throw std::invalid_argument("v_pre length does not match synapse channel count");
  if (state.size() != 4 + n_syn)
    throw std::invalid_argument("state length does not match node dimension");
  dxdt.resize(state.size());

  const NeuronParams& p = config.neuron;
  const double v = state[kVoltIdx];
  const double m = state[kGateMIdx];
  const double h = state[kGateHIdx];
  const double n = state[kGateNIdx];

  double i_total = p.gbar_na * m * m * m * h * (v - p.e_na) +
                   p.gbar_k * n * n * n * n * (v - p.e_k) +
                   p.gbar_l * (v - p.e_l);
  for (Eigen::Index j = 0; j < n_syn; ++j) {
    const SynapseParams& s = config.synapses[j];
    i_total += s.gbar_syn * state[kSynIdx + j] * (v - s.e_syn);
  }
  dxdt[kVoltIdx] = -i_total / p.c_m;

  const GateRates r = gate_rates(v);
  const double kappa = p.rate_scale;
  dxdt[kGateMIdx] = kappa * (r.alpha_m * (1.0 - m) - r.beta_m * m);
  dxdt[kGateHIdx] = kappa * (r.alpha_h * (1.0 - h) - r.beta_h * h);
  dxdt[kGateNIdx] = kappa * (r.alpha_n * (1.0 - n) - r.beta_n * n);

  for (Eigen::Index j = 0; j < n_syn; ++j)
    dxdt[kSynIdx + j] =
        synapse_activation_rhs(config.synapses[j], state[kSynIdx + j], v_pre[j]);
}

namespace {

// Steady-state membrane current with gates at their voltage equilibria.
double silent_current(const NeuronParams& p, double v) {
  const GateRates r = gate_rates(v);
  const double m = gate_steady(r.alpha_m, r.beta_m);
  const double h = gate_steady(r.alpha_h, r.beta_h);
  const double n = gate_steady(r.alpha_n, r.beta_n);
  return p.gbar_na * m * m * m * h * (v - p.e_na) +
         p.gbar_k * n * n * n * n * (v - p.e_k) + p.gbar_l * (v - p.e_l);
}

}  // namespace

double resting_potential(const NeuronParams& params) {
  double v = -65.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = silent_current(params, v);
    if (std::abs(f) < 1e-10) return v;
    const double dv = 1e-6;
    const double df = (silent_current(params, v + dv) - silent_current(params, v - dv)) / (2.0 * dv);
    if (df == 0.0) break;
    double step = -f / df;
    // damping: the current balance is steep near spike threshold
    double scale = 1.0;
    while (scale > 1e-6 && std::abs(silent_current(params, v + scale * step)) > std::abs(f))
      scale *= 0.5;
    v += scale * step;
  }
  if (std::abs(silent_current(params, v)) >= 1e-10)
    throw std::runtime_error("resting potential iteration failed to converge");
  return v;
}

Eigen::VectorXd resting_state(const NodeConfig& config) {
  const double v = resting_potential(config.neuron);
  const GateRates r = gate_rates(v);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(state_dim(config));
  state[kVoltIdx] = v;
  state[kGateMIdx] = gate_steady(r.alpha_m, r.beta_m);
  state[kGateHIdx] = gate_steady(r.alpha_h, r.beta_h);
  state[kGateNIdx] = gate_steady(r.alpha_n, r.beta_n);
  return state;
}

}  // namespace eventdf
