#ifndef EVENTDF_TOOLS_RUN_CONFIG_HPP
#define EVENTDF_TOOLS_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include "eventdf/edf.hpp"
#include "eventdf/node.hpp"

namespace eventdf::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Effective parameters of one CLI run. Values come from built-in defaults,
/// then an optional TOML config file, then command-line flags (in that
/// order of precedence, later wins).
struct RunConfig {
  NeuronParams neuron;
  SynapseParams nominal = SynapseParams::inhibitory();
  SynapseParams perturbation = SynapseParams::excitatory(0.02);
  SimConfig sim;

  // sweep grids
  double t_min = 50.0, t_max = 140.0, t_step = 0.5;     // eDF periods
  double tp_min = -20.0, tp_max = 50.0, tp_step = 0.25; // ePRC offsets
  double t_n = 100.0;                                   // ePRC nominal period
  std::string vary;                                     // "" | tau-decay | gbar-syn
  std::vector<double> values;
};

/// Loads a flat-table TOML file ([neuron], [synapse.nominal],
/// [synapse.perturbation], [sim], [sweep]) over the given defaults.
/// Unknown keys and malformed lines are configuration errors.
void load_toml(const std::string& path, RunConfig& config);

/// Canonical serialization of the effective config; its hash is embedded
/// in every output file for provenance.
std::string canonical_string(const RunConfig& config);
std::string config_hash(const RunConfig& config);

}  // namespace eventdf::cli

#endif
