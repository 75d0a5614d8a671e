#include "eventdf/edf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eventdf/parallel.hpp"

namespace eventdf {

const char* to_string(LockClass lock) {
  switch (lock) {
    case LockClass::Locked11: return "locked_1_1";
    case LockClass::PhaseSlip: return "phase_slip";
    case LockClass::HigherOrder: return "higher_order";
    case LockClass::Suppressed: return "suppressed";
  }
  return "unknown";
}

void SteadyStateProtocol::validate() const {
  if (n_transient < 0 || n_window < 1)
    throw std::invalid_argument("protocol window too short to classify");
  if (delay_tol <= 0.0 || flatness_tol <= 0.0)
    throw std::invalid_argument("protocol tolerances must be positive");
  sim.validate();
}

EdfSample steady_state_delay(const NodeConfig& config, double period,
                             const SteadyStateProtocol& protocol) {
  if (period <= 0.0) throw std::invalid_argument("period must be positive");
  protocol.validate();
  if (config.synapses.empty())
    throw std::invalid_argument("node needs a synapse channel to drive");

  const int n_total = protocol.n_transient + protocol.n_window;
  const double t0 = protocol.start_offset;
  EventTrain drive = EventTrain::periodic(t0, period, n_total);
  drive.validate();

  std::vector<EventTrain> inputs(config.synapses.size());
  inputs[0] = drive;

  SimConfig sim = protocol.sim;
  sim.t_end = t0 + n_total * period;

  EdfSample sample;
  sample.period = period;

  const SimOutput out = simulate_node(config, inputs, sim);

  // outputs per measurement period, delay measured from the period's input
  std::vector<int> counts(protocol.n_window, 0);
  std::vector<double> delays;
  for (double e : out.events) {
    const int p = static_cast<int>(std::floor((e - t0) / period));
    const int w = p - protocol.n_transient;
    if (w < 0 || w >= protocol.n_window) continue;
    counts[w]++;
    delays.push_back(e - (t0 + p * period));
  }

  const long long n_out = std::accumulate(counts.begin(), counts.end(), 0LL);
  if (n_out == 0) {
    sample.lock = LockClass::Suppressed;
    return sample;
  }

  const bool one_per_period =
      std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; });
  if (one_per_period) {
    const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
    if (*hi - *lo < protocol.delay_tol) {
      sample.lock = LockClass::Locked11;
      sample.delta = std::accumulate(delays.begin(), delays.end(), 0.0) /
                     static_cast<double>(delays.size());
      sample.phi = sample.delta / period;
      return sample;
    }
    sample.lock = LockClass::PhaseSlip;
    return sample;
  }

  // consistent N:M pattern with M <= 4 counts as a higher-order mode
  sample.lock = LockClass::PhaseSlip;
  for (int m = 1; m <= 4 && m < protocol.n_window; ++m) {
    bool periodic = true;
    for (int w = 0; w + m < protocol.n_window; ++w)
      if (counts[w] != counts[w + m]) { periodic = false; break; }
    if (!periodic) continue;
    const int n_per_block = std::accumulate(counts.begin(), counts.begin() + m, 0);
    if (n_per_block != m) {
      sample.lock = LockClass::HigherOrder;
      break;
    }
  }
  return sample;
}

double isolated_event_delay(const NodeConfig& config, const SimConfig& sim_base) {
  if (config.synapses.empty())
    throw std::invalid_argument("node needs a synapse channel to drive");
  EventTrain train;
  train.times = {20.0};
  std::vector<EventTrain> inputs(config.synapses.size());
  inputs[0] = train;
  SimConfig sim = sim_base;
  sim.t_end = std::max(sim.t_end, 400.0);
  const SimOutput out = simulate_node(config, inputs, sim);
  if (out.events.empty())
    throw std::runtime_error("no output event for isolated input");
  return out.events.front() - 20.0;
}

EdfCharacteristics extract_characteristics(const std::vector<EdfSample>& samples,
                                           double flatness_tol) {
  EdfCharacteristics chars;
  if (samples.empty()) return chars;

  auto locked = [](const EdfSample& s) {
    return !s.failed && s.lock == LockClass::Locked11;
  };
  if (!locked(samples.back())) return chars;  // no locked region at the top

  // contiguous Locked11 region ending at the top of the grid
  std::size_t first = samples.size() - 1;
  while (first > 0 && locked(samples[first - 1])) --first;
  const std::size_t n_locked = samples.size() - first;

  const std::size_t decile = std::max<std::size_t>(1, n_locked / 10);
  double sum = 0.0;
  for (std::size_t i = samples.size() - decile; i < samples.size(); ++i)
    sum += samples[i].delta;
  chars.delta_inf = sum / static_cast<double>(decile);

  chars.t_r = samples.back().period;
  for (std::size_t i = samples.size(); i-- > first;) {
    if (std::abs(samples[i].delta - chars.delta_inf) < flatness_tol)
      chars.t_r = samples[i].period;
    else
      break;
  }
  chars.t_min = samples[first].period;
  chars.defined = true;
  return chars;
}

EdfCurve sweep_edf(const NodeConfig& config, const std::vector<double>& periods,
                   const SteadyStateProtocol& protocol, int jobs) {
  if (periods.empty()) throw std::invalid_argument("period grid is empty");
  if (!std::is_sorted(periods.begin(), periods.end()) ||
      std::adjacent_find(periods.begin(), periods.end()) != periods.end())
    throw std::invalid_argument("period grid must be strictly increasing");

  EdfCurve curve;
  curve.samples.resize(periods.size());
  parallel_for(periods.size(), jobs, [&](std::size_t i) {
    try {
      curve.samples[i] = steady_state_delay(config, periods[i], protocol);
    } catch (const std::exception& e) {
      curve.samples[i].period = periods[i];
      curve.samples[i].failed = true;
      curve.samples[i].fail_reason = e.what();
    }
  });
  curve.characteristics = extract_characteristics(curve.samples, protocol.flatness_tol);
  return curve;
}

std::vector<std::pair<double, EdfCurve>> sweep_edf_parameters(
    const NodeConfig& base, SweepParam vary, const std::vector<double>& values,
    const std::vector<double>& periods, const SteadyStateProtocol& protocol,
    int jobs) {
  if (base.synapses.empty())
    throw std::invalid_argument("node needs a synapse channel to vary");

  std::vector<NodeConfig> configs;
  for (double value : values) {
    NodeConfig config = base;
    SynapseParams& syn = config.synapses[0];
    if (vary == SweepParam::TauDecay)
      syn.tau_decay = value;
    else
      syn.gbar_syn = value;
    syn.validate();  // reject invalid values before any simulation
    configs.push_back(std::move(config));
  }

  std::vector<std::pair<double, EdfCurve>> result;
  result.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    result.emplace_back(values[i], sweep_edf(configs[i], periods, protocol, jobs));
  return result;
}

}  // namespace eventdf
