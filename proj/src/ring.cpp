#include "eventdf/ring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eventdf/parallel.hpp"

namespace eventdf {

void RingSpec::validate() const {
  if (nodes.size() < 2) throw std::invalid_argument("ring needs at least 2 nodes");
  for (const auto& node : nodes) {
    node.validate();
    if (node.synapses.empty())
      throw std::invalid_argument("every ring node needs a coupling synapse");
  }
  if (kickstart.times.empty()) throw std::invalid_argument("kickstart must be nonempty");
  if (kick_node < 0 || kick_node >= static_cast<int>(nodes.size()))
    throw std::invalid_argument("kick_node out of range");
  kickstart.validate();
}

namespace {

// Pulse realization shared by kickstart, coupling, and forcing inputs.
struct PulseShape {
  double width, amplitude, baseline;
};

/// One-global-step co-integration of a ring. Each node's coupling synapse
/// sees its predecessor's membrane voltage (zero-order held over the step),
/// so the synapse is driven by the actual spike waveform; external inputs
/// (kickstart, forcing, perturbations) stay square event pulses. Output
/// events are detected per node for rasters, delays, and lags.
class RingEngine {
 public:
  RingEngine(const RingSpec& spec, const SimConfig& sim)
      : spec_(spec), sim_(sim), n_(spec.nodes.size()) {
    spec_.validate();
    sim_.validate();
    shape_ = {spec.kickstart.pulse_width, spec.kickstart.pulse_amplitude,
              spec.kickstart.baseline};
    configs_ = spec.nodes;
    extra_trains_.resize(n_);
  }

  /// Adds a synapse channel to one node, driven by an external train.
  void add_channel(std::size_t node, const SynapseParams& syn,
                   const EventTrain& train) {
    configs_[node].synapses.push_back(syn);
    extra_trains_[node].push_back(train);
  }

  void run() {
    events_.assign(n_, {});
    states_.clear();
    for (std::size_t i = 0; i < n_; ++i) states_.push_back(resting_state(configs_[i]));
    v_step_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) v_step_[i] = states_[i][kVoltIdx];

    std::vector<Eigen::VectorXd> k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_), v_pre(n_);
    for (std::size_t i = 0; i < n_; ++i)
      v_pre[i].resize(static_cast<Eigen::Index>(configs_[i].synapses.size()));

    std::vector<double> v_prev(n_);
    for (std::size_t i = 0; i < n_; ++i) v_prev[i] = states_[i][kVoltIdx];

    const double dt = sim_.dt;
    const auto n_steps = static_cast<long>(std::ceil(sim_.t_end / dt));
    std::vector<double> fresh;

    for (long step = 0; step < n_steps; ++step) {
      const double t = step * dt;
      fresh.assign(n_, -1.0);

      for (std::size_t i = 0; i < n_; ++i) {
        Eigen::VectorXd& x = states_[i];
        fill_presynaptic(i, t, v_pre[i]);
        membrane_rhs(configs_[i], x, v_pre[i], k1[i]);
        fill_presynaptic(i, t + 0.5 * dt, v_pre[i]);
        tmp[i] = x + 0.5 * dt * k1[i];
        membrane_rhs(configs_[i], tmp[i], v_pre[i], k2[i]);
        tmp[i] = x + 0.5 * dt * k2[i];
        membrane_rhs(configs_[i], tmp[i], v_pre[i], k3[i]);
        fill_presynaptic(i, t + dt, v_pre[i]);
        tmp[i] = x + dt * k3[i];
        membrane_rhs(configs_[i], tmp[i], v_pre[i], k4[i]);
        x += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        if (!x.allFinite()) throw IntegrationError("non-finite state", t + dt);
        for (Eigen::Index j = kGateMIdx; j < x.size(); ++j) {
          if (x[j] < 0.0) {
            if (x[j] < -1e-9) throw IntegrationError("gating variable left [0,1]", t + dt);
            x[j] = 0.0;
          } else if (x[j] > 1.0) {
            if (x[j] > 1.0 + 1e-9) throw IntegrationError("gating variable left [0,1]", t + dt);
            x[j] = 1.0;
          }
        }

        const double v_now = x[kVoltIdx];
        if (v_prev[i] < sim_.spike_threshold && v_now >= sim_.spike_threshold) {
          const double frac = (sim_.spike_threshold - v_prev[i]) / (v_now - v_prev[i]);
          const double t_cross = t + frac * dt;
          if (events_[i].empty() || t_cross - events_[i].back() >= sim_.refractory_min)
            fresh[i] = t_cross;
        }
        v_prev[i] = v_now;
      }

      // commit after all nodes stepped: step-k results act from step k+1
      for (std::size_t i = 0; i < n_; ++i) {
        if (fresh[i] >= 0.0) events_[i].push_back(fresh[i]);
        v_step_[i] = states_[i][kVoltIdx];
      }
    }
  }

  const std::vector<std::vector<double>>& events() const { return events_; }

 private:
  void fill_presynaptic(std::size_t node, double t, Eigen::VectorXd& v_pre) const {
    const std::size_t pred = (node + n_ - 1) % n_;
    double v = v_step_[pred];
    if (static_cast<int>(node) == spec_.kick_node)
      v = std::max(v, presynaptic_waveform(spec_.kickstart, t));
    v_pre[0] = v;
    for (std::size_t c = 0; c < extra_trains_[node].size(); ++c)
      v_pre[static_cast<Eigen::Index>(c + 1)] =
          presynaptic_waveform(extra_trains_[node][c], t);
  }

  RingSpec spec_;
  SimConfig sim_;
  std::size_t n_;
  PulseShape shape_{};
  std::vector<NodeConfig> configs_;
  std::vector<std::vector<EventTrain>> extra_trains_;
  std::vector<Eigen::VectorXd> states_;
  std::vector<double> v_step_;  // start-of-step membrane voltages
  std::vector<std::vector<double>> events_;
};

constexpr double kLockTol = 0.05;     // ms, period variation over final cycles
constexpr int kMeasureCycles = 5;

}  // namespace

RingResult simulate_ring(const RingSpec& spec, const SimConfig& sim) {
  RingEngine engine(spec, sim);
  engine.run();

  RingResult result;
  result.rasters = engine.events();
  const std::size_t n = spec.nodes.size();

  const auto& ref = result.rasters[0];
  if (ref.size() < kMeasureCycles + 1) {
    result.diagnostic = "rhythm not sustained (reference node fired " +
                        std::to_string(ref.size()) + " times)";
    return result;
  }

  std::vector<double> intervals;
  for (std::size_t i = ref.size() - kMeasureCycles; i < ref.size(); ++i)
    intervals.push_back(ref[i] - ref[i - 1]);
  const auto [lo, hi] = std::minmax_element(intervals.begin(), intervals.end());
  result.period = std::accumulate(intervals.begin(), intervals.end(), 0.0) /
                  intervals.size();
  result.n_cycles_measured = kMeasureCycles;
  if (*hi - *lo >= kLockTol) {
    result.diagnostic = "period variation above lock tolerance";
    return result;
  }
  result.locked = true;

  // edge delays: predecessor event -> successor event, averaged over the
  // final measured cycles
  result.per_node_delays.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pred = result.rasters[i];
    const auto& succ = result.rasters[(i + 1) % n];
    if (succ.size() < kMeasureCycles) {
      result.locked = false;
      result.diagnostic = "node " + std::to_string((i + 1) % n) + " fell silent";
      return result;
    }
    double sum = 0.0;
    int counted = 0;
    for (std::size_t j = succ.size() - kMeasureCycles; j < succ.size(); ++j) {
      auto it = std::upper_bound(pred.begin(), pred.end(), succ[j]);
      if (it == pred.begin()) continue;
      sum += succ[j] - *(it - 1);
      ++counted;
    }
    if (counted == 0) {
      result.locked = false;
      result.diagnostic = "edge " + std::to_string(i) + " has no delay samples";
      return result;
    }
    result.per_node_delays[i] = sum / counted;
  }
  return result;
}

EntrainmentReport drive_ring(const RingSpec& spec, const SynapseParams& forcing,
                             double forcing_period, double t_net,
                             const SimConfig& sim) {
  if (forcing_period <= 0.0) throw std::invalid_argument("forcing period must be positive");
  forcing.validate();

  const int settle_cycles = 15;
  const int forcing_cycles = 40;
  const double t_f0 = settle_cycles * t_net;
  EventTrain force = EventTrain::periodic(t_f0, forcing_period, forcing_cycles);
  force.pulse_width = spec.kickstart.pulse_width;
  force.pulse_amplitude = spec.kickstart.pulse_amplitude;
  force.baseline = spec.kickstart.baseline;

  SimConfig run = sim;
  run.t_end = t_f0 + (forcing_cycles + 10) * std::max(forcing_period, t_net);

  RingEngine engine(spec, run);
  engine.add_channel(0, forcing, force);
  engine.run();

  EntrainmentReport report;
  const std::size_t n = spec.nodes.size();
  // node 0's ring input events are its predecessor's outputs
  const std::vector<double>& inputs = engine.events()[n - 1];
  if (inputs.size() < 10) throw std::runtime_error("ring failed to oscillate");

  // pair forcing cycle k with input index idx0 + k (consecutive cycles, no
  // re-pairing, so unlocked runs accumulate an unwrapped drift)
  auto nearest = [&](double t) {
    auto it = std::lower_bound(inputs.begin(), inputs.end(), t);
    if (it == inputs.end()) return inputs.size() - 1;
    std::size_t idx = it - inputs.begin();
    if (idx > 0 && t - inputs[idx - 1] < inputs[idx] - t) --idx;
    return idx;
  };
  const std::size_t idx0 = nearest(force.times.front());

  std::vector<double> lags;  // input - forcing, per forcing cycle
  for (std::size_t k = 0; k < force.times.size(); ++k) {
    if (idx0 + k >= inputs.size()) break;
    lags.push_back(inputs[idx0 + k] - force.times[k]);
  }
  if (lags.size() < 12) {
    report.locked = false;
    report.drift_rate = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  const std::size_t last = lags.size();
  const auto [lo, hi] =
      std::minmax_element(lags.begin() + (last - kMeasureCycles), lags.end());
  if (*hi - *lo < kLockTol) {
    report.locked = true;
    double lag = -lags.back();  // ePRC coordinate: forcing relative to input
    while (lag > forcing_period / 2.0) lag -= forcing_period;
    while (lag <= -forcing_period / 2.0) lag += forcing_period;
    report.measured_lag = lag;
  } else {
    const int n_drift = 10;
    report.drift_rate = (lags[last - 1] - lags[last - 1 - n_drift]) / n_drift;
  }
  return report;
}

PrcCurve ring_eprc(const RingSpec& spec, const SynapseParams& perturbation,
                   const std::vector<double>& tp_grid, const SimConfig& sim,
                   int jobs) {
  if (tp_grid.empty()) throw std::invalid_argument("t_p grid is empty");

  // nominal free-running oscillation
  RingEngine nominal(spec, sim);
  nominal.run();
  const std::size_t n = spec.nodes.size();
  const std::vector<double> nom_inputs = nominal.events()[n - 1];
  const std::vector<double> nom_outputs = nominal.events()[0];
  if (nom_inputs.size() < 14 || nom_outputs.size() < 14)
    throw std::runtime_error("ring nominal oscillation too short for an ePRC");

  // reference input event: 10 cycles before the end, so the shift has
  // settled well inside the horizon
  const std::size_t k0 = nom_inputs.size() - 10;
  const double t_ref = nom_inputs[k0];

  PrcCurve curve;
  curve.protocol.t_n = nom_outputs.back() - nom_outputs[nom_outputs.size() - 2];
  curve.protocol.mode = PrcMode::FullOscillation;
  curve.protocol.perturbation = perturbation;
  curve.protocol.tp_grid = tp_grid;
  curve.nominal.t_n = curve.protocol.t_n;
  curve.nominal.output_delay = 0.0;
  curve.samples.resize(tp_grid.size());

  // first nominal output after the perturbed cycle settles
  auto first_after = [&](const std::vector<double>& events, double t) {
    return static_cast<std::size_t>(
        std::lower_bound(events.begin(), events.end(), t) - events.begin());
  };

  parallel_for(tp_grid.size(), jobs, [&](std::size_t gi) {
    const double t_p = tp_grid[gi];
    PrcSample& sample = curve.samples[gi];
    sample.t_p = t_p;
    try {
      EventTrain pulse;
      pulse.times = {t_ref + t_p};
      pulse.pulse_width = spec.kickstart.pulse_width;
      pulse.pulse_amplitude = spec.kickstart.pulse_amplitude;
      pulse.baseline = spec.kickstart.baseline;

      RingEngine engine(spec, sim);
      engine.add_channel(0, perturbation, pulse);
      engine.run();
      const std::vector<double>& outputs = engine.events()[0];
      if (outputs.size() != nom_outputs.size()) {
        sample.fail_class = outputs.size() < nom_outputs.size()
                                ? LockClass::Suppressed
                                : LockClass::PhaseSlip;
        return;
      }
      const std::size_t j0 = first_after(nom_outputs, t_ref + t_p) + 3;
      if (j0 + 5 > nom_outputs.size())
        throw std::runtime_error("horizon too short after the perturbation");
      double sum = 0.0;
      for (std::size_t j = j0; j < j0 + 5; ++j) sum += outputs[j] - nom_outputs[j];
      sample.delta_shift = sum / 5.0;
      sample.valid = true;
    } catch (const std::exception&) {
      sample.valid = false;
      sample.fail_class = LockClass::PhaseSlip;
    }
  });
  return curve;
}

PredictionResult predict_ring_period(const std::vector<EdfCurve>& curves) {
  if (curves.empty()) throw std::invalid_argument("no eDF curves supplied");

  // per curve: contiguous Locked11 region ending at the top of its grid
  struct Segment {
    std::vector<double> t, phi;
  };
  std::vector<Segment> segments;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& curve : curves) {
    Segment seg;
    const auto& s = curve.samples;
    std::size_t last = s.size();
    while (last > 0 && (s[last - 1].failed || s[last - 1].lock != LockClass::Locked11))
      --last;
    std::size_t first = last;
    while (first > 0 && !s[first - 1].failed &&
           s[first - 1].lock == LockClass::Locked11)
      --first;
    for (std::size_t i = first; i < last; ++i) {
      seg.t.push_back(s[i].period);
      seg.phi.push_back(s[i].phi);
    }
    if (seg.t.size() < 2)
      throw std::invalid_argument("a curve has no usable 1:1-locked region");
    lo = std::max(lo, seg.t.front());
    hi = std::min(hi, seg.t.back());
    segments.push_back(std::move(seg));
  }
  if (!(lo < hi)) throw std::invalid_argument("curves share no common locked range");

  auto interp = [](const Segment& seg, double t) {
    auto it = std::lower_bound(seg.t.begin(), seg.t.end(), t);
    if (it == seg.t.begin()) return seg.phi.front();
    if (it == seg.t.end()) return seg.phi.back();
    const std::size_t i = it - seg.t.begin();
    const double f = (t - seg.t[i - 1]) / (seg.t[i] - seg.t[i - 1]);
    return seg.phi[i - 1] + f * (seg.phi[i] - seg.phi[i - 1]);
  };
  auto total = [&](double t) {
    double s = 0.0;
    for (const auto& seg : segments) s += interp(seg, t);
    return s;
  };

  // merged evaluation grid over the common range
  std::vector<double> grid;
  for (const auto& seg : segments)
    for (double t : seg.t)
      if (t >= lo && t <= hi) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  PredictionResult result;
  // monotonicity of S(T) indicates a unique solution
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = total(grid[i]) - total(grid[i - 1]);
    if (d <= 0.0) increasing = false;
    if (d >= 0.0) decreasing = false;
  }
  result.unique = increasing || decreasing;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = total(grid[i]) - 1.0;
    if (std::abs(g) < 1e-12) {
      result.t_star = grid[i];
      result.residual = std::abs(g);
      return result;
    }
    if (i == 0) continue;
    const double g_prev = total(grid[i - 1]) - 1.0;
    if (g_prev * g < 0.0) {
      double a = grid[i - 1], b = grid[i];
      double ga = g_prev;
      while (b - a > 0.01) {
        const double mid = 0.5 * (a + b);
        const double gm = total(mid) - 1.0;
        if (ga * gm <= 0.0)
          b = mid;
        else {
          a = mid;
          ga = gm;
        }
      }
      result.t_star = 0.5 * (a + b);
      result.residual = std::abs(total(*result.t_star) - 1.0);
      return result;
    }
  }
  result.diagnostic = "sum of relative phases never crosses 1 on the common range";
  return result;
}

RingSpec make_homogeneous_ring(int n, const NodeConfig& node, double period_hint) {
  if (n < 2) throw std::invalid_argument("ring needs at least 2 nodes");
  if (period_hint <= 0.0) throw std::invalid_argument("period hint must be positive");
  RingSpec spec;
  spec.nodes.assign(n, node);
  spec.kickstart.times = {5.0, 5.0 + period_hint};
  spec.kick_node = 0;
  return spec;
}

}  // namespace eventdf
