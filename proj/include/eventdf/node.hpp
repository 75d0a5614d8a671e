#ifndef EVENTDF_NODE_HPP
#define EVENTDF_NODE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "eventdf/neuron.hpp"
#include "eventdf/synapse.hpp"

namespace eventdf {

/// One excitable node: an HH membrane with one or more synapse channels.
struct NodeConfig {
  NeuronParams neuron;
  std::vector<SynapseParams> synapses;

  void validate() const {
    neuron.validate();
    for (const auto& s : synapses) s.validate();
  }
};

// State vector layout: [V, m, h, n, h_syn_0, ..., h_syn_{S-1}].
inline int state_dim(const NodeConfig& config) {
  return 4 + static_cast<int>(config.synapses.size());
}

constexpr int kVoltIdx = 0;
constexpr int kGateMIdx = 1;
constexpr int kGateHIdx = 2;
constexpr int kGateNIdx = 3;
constexpr int kSynIdx = 4;

/// Membrane + gating + synapse right-hand side. v_pre holds one presynaptic
/// voltage per synapse channel.
void membrane_rhs(const NodeConfig& config, const Eigen::VectorXd& state,
                  const Eigen::VectorXd& v_pre, Eigen::VectorXd& dxdt);

/// Resting membrane potential of the silent node (damped Newton on the
/// steady-state current balance, residual < 1e-10).
double resting_potential(const NeuronParams& params);

/// Full resting state (V_rest, m_inf, h_inf, n_inf, h_syn = 0).
Eigen::VectorXd resting_state(const NodeConfig& config);

}  // namespace eventdf

#endif
