#include "eventdf/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "eventdf/io.hpp"

namespace eventdf {

namespace {

void fill_presynaptic(const std::vector<EventTrain>& inputs, double t,
                      Eigen::VectorXd& v_pre) {
  for (std::size_t j = 0; j < inputs.size(); ++j)
    v_pre[static_cast<Eigen::Index>(j)] = presynaptic_waveform(inputs[j], t);
}

// Bounded variables (gates, synaptic activations) live in [0,1]; tiny
// numerical excursions are clamped, anything larger is a failed step.
void clamp_unit_interval(Eigen::VectorXd& state, double t) {
  for (Eigen::Index i = kGateMIdx; i < state.size(); ++i) {
    double& x = state[i];
    if (x < 0.0) {
      if (x < -1e-9) throw IntegrationError("gating variable left [0,1]", t);
      x = 0.0;
    } else if (x > 1.0) {
      if (x > 1.0 + 1e-9) throw IntegrationError("gating variable left [0,1]", t);
      x = 1.0;
    }
  }
}

}  // namespace

SimOutput simulate_node(const NodeConfig& config,
                        const std::vector<EventTrain>& inputs, const SimConfig& sim,
                        const Eigen::VectorXd* initial) {
  config.validate();
  sim.validate();
  if (inputs.size() != config.synapses.size())
    throw std::invalid_argument("one input train per synapse channel required");

  const Eigen::Index dim = state_dim(config);
  Eigen::VectorXd state = initial ? *initial : resting_state(config);
  if (state.size() != dim) throw std::invalid_argument("initial state dimension mismatch");

  const auto n_syn = static_cast<Eigen::Index>(inputs.size());
  Eigen::VectorXd v_pre(n_syn), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  SimOutput out;
  const auto n_steps = static_cast<long>(std::ceil(sim.t_end / sim.dt));

  if (sim.record_trace) {
    Trace trace;
    trace.labels = {"V", "m", "h", "n"};
    for (Eigen::Index j = 0; j < n_syn; ++j)
      trace.labels.push_back("h_syn_" + std::to_string(j));
    trace.values.resize(static_cast<std::size_t>(dim));
    trace.times.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.trace = std::move(trace);
  }

  auto record = [&](double t) {
    if (!out.trace) return;
    out.trace->times.push_back(t);
    for (Eigen::Index i = 0; i < dim; ++i)
      out.trace->values[static_cast<std::size_t>(i)].push_back(state[i]);
  };
  record(0.0);

  double v_prev = state[kVoltIdx];
  for (long step = 0; step < n_steps; ++step) {
    const double t = step * sim.dt;
    const double dt = sim.dt;

    fill_presynaptic(inputs, t, v_pre);
    membrane_rhs(config, state, v_pre, k1);

    fill_presynaptic(inputs, t + 0.5 * dt, v_pre);
    tmp = state + 0.5 * dt * k1;
    membrane_rhs(config, tmp, v_pre, k2);
    tmp = state + 0.5 * dt * k2;
    membrane_rhs(config, tmp, v_pre, k3);

    fill_presynaptic(inputs, t + dt, v_pre);
    tmp = state + dt * k3;
    membrane_rhs(config, tmp, v_pre, k4);

    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = t + dt;

    if (!state.allFinite()) throw IntegrationError("non-finite state", t_next);
    clamp_unit_interval(state, t_next);

    const double v_now = state[kVoltIdx];
    if (v_prev < sim.spike_threshold && v_now >= sim.spike_threshold) {
      const double frac = (sim.spike_threshold - v_prev) / (v_now - v_prev);
      const double t_cross = t + frac * dt;
      if (out.events.empty() || t_cross - out.events.back() >= sim.refractory_min)
        out.events.push_back(t_cross);
    }
    v_prev = v_now;
    record(t_next);
  }

  out.suppressed = out.events.empty();
  return out;
}

ConvergenceReport convergence_check(const NodeConfig& config,
                                    const std::vector<EventTrain>& inputs,
                                    const SimConfig& sim) {
  SimConfig fine = sim;
  fine.dt = sim.dt / 2.0;
  const SimOutput coarse_out = simulate_node(config, inputs, sim);
  const SimOutput fine_out = simulate_node(config, inputs, fine);

  ConvergenceReport report;
  report.count_coarse = coarse_out.events.size();
  report.count_fine = fine_out.events.size();
  report.event_counts_match = report.count_coarse == report.count_fine;
  if (report.event_counts_match) {
    for (std::size_t i = 0; i < coarse_out.events.size(); ++i)
      report.max_deviation =
          std::max(report.max_deviation, std::abs(coarse_out.events[i] - fine_out.events[i]));
  }
  return report;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t";
  for (const auto& label : trace.labels) out << "," << label;
  out << "\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << format_double(trace.times[i]);
    for (const auto& column : trace.values) out << "," << format_double(column[i]);
    out << "\n";
  }
}

}  // namespace eventdf
