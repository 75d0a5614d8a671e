#include "eventdf/eprc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eventdf/parallel.hpp"

namespace eventdf {

const char* to_string(Stability stability) {
  switch (stability) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "unknown";
}

std::vector<double> PrcProtocol::default_grid(double t_n, double tp_min, double step) {
  std::vector<double> grid;
  for (double tp = tp_min; tp <= t_n + 1e-9; tp += step) grid.push_back(tp);
  return grid;
}

NominalOscillation nominal_oscillation(const NodeConfig& config, double t_n,
                                       PrcMode mode,
                                       const SteadyStateProtocol& steady) {
  const EdfSample sample = steady_state_delay(config, t_n, steady);
  if (sample.lock != LockClass::Locked11) throw NotLockedError(sample.lock, t_n);

  if (mode == PrcMode::SingleEvent) {
    const double iso = isolated_event_delay(config, steady.sim);
    if (std::abs(iso - sample.delta) > 0.05)
      throw std::runtime_error(
          "SingleEvent mode requires T_N above the resting period "
          "(periodic and isolated delays disagree)");
  }

  NominalOscillation nominal;
  nominal.t_n = t_n;
  nominal.output_delay = sample.delta;
  return nominal;
}

PrcSample eprc_point(const NodeConfig& config, const PrcProtocol& protocol,
                     const NominalOscillation& nominal, double t_p) {
  const SteadyStateProtocol& steady = protocol.steady;
  const double t_n = nominal.t_n;
  const int n_total = steady.n_transient + steady.n_window;

  // start offset large enough that the earliest perturbation is at t >= 1
  const double t0 = std::max(steady.start_offset, 1.0 - t_p);

  NodeConfig perturbed = config;
  perturbed.synapses.push_back(protocol.perturbation);

  std::vector<EventTrain> inputs(perturbed.synapses.size());
  inputs[0] = EventTrain::periodic(t0, t_n, n_total);
  inputs.back() = EventTrain::periodic(t0 + t_p, t_n, n_total);

  SimConfig sim = steady.sim;
  sim.t_end = t0 + n_total * t_n + std::max(0.0, t_p) + 1.0;

  PrcSample result;
  result.t_p = t_p;

  const SimOutput out = simulate_node(perturbed, inputs, sim);

  // one output per window period with stable delay, as in the eDF protocol
  std::vector<int> counts(steady.n_window, 0);
  std::vector<double> delays;
  for (double e : out.events) {
    const int p = static_cast<int>(std::floor((e - t0) / t_n));
    const int w = p - steady.n_transient;
    if (w < 0 || w >= steady.n_window) continue;
    counts[w]++;
    delays.push_back(e - (t0 + p * t_n));
  }

  if (delays.empty()) {
    result.fail_class = LockClass::Suppressed;
    return result;
  }
  const bool one_each =
      std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; });
  const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
  if (!one_each || *hi - *lo >= steady.delay_tol) {
    result.fail_class = LockClass::PhaseSlip;
    return result;
  }

  const double mean =
      std::accumulate(delays.begin(), delays.end(), 0.0) / delays.size();
  result.delta_shift = mean - nominal.output_delay;
  result.valid = true;
  return result;
}

PrcCurve sweep_eprc(const NodeConfig& config, const PrcProtocol& protocol,
                    int jobs) {
  if (protocol.tp_grid.empty()) throw std::invalid_argument("t_p grid is empty");
  if (!std::is_sorted(protocol.tp_grid.begin(), protocol.tp_grid.end()))
    throw std::invalid_argument("t_p grid must be ordered");

  PrcCurve curve;
  curve.protocol = protocol;
  curve.nominal =
      nominal_oscillation(config, protocol.t_n, protocol.mode, protocol.steady);

  curve.samples.resize(protocol.tp_grid.size());
  parallel_for(protocol.tp_grid.size(), jobs, [&](std::size_t i) {
    const double tp = protocol.tp_grid[i];
    try {
      curve.samples[i] = eprc_point(config, protocol, curve.nominal, tp);
    } catch (const std::exception&) {
      curve.samples[i].t_p = tp;
      curve.samples[i].valid = false;
      curve.samples[i].fail_class = LockClass::PhaseSlip;
    }
  });
  return curve;
}

std::vector<Equilibrium> find_equilibria(const PrcCurve& curve, double delta_t,
                                         double zero_tol) {
  std::vector<const PrcSample*> valid;
  for (const auto& s : curve.samples)
    if (s.valid) valid.push_back(&s);
  if (valid.size() < 2)
    throw std::invalid_argument("need at least 2 valid samples to locate equilibria");

  // central-difference slopes on the valid subgrid
  std::vector<double> slope(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == valid.size() ? i : i + 1;
    slope[i] = (valid[hi]->delta_shift - valid[lo]->delta_shift) /
               (valid[hi]->t_p - valid[lo]->t_p);
  }

  auto classify = [](double s) {
    if (s < 0.0) return Stability::Unstable;
    if (s > 0.0 && s < 2.0) return Stability::Stable;
    return Stability::Marginal;
  };

  std::vector<Equilibrium> result;
  for (std::size_t i = 0; i + 1 < valid.size(); ++i) {
    const double g0 = valid[i]->delta_shift - delta_t;
    const double g1 = valid[i + 1]->delta_shift - delta_t;
    if (g0 * g1 >= 0.0) continue;
    // noise-level wiggles around zero are not equilibria: a crossing counts
    // only if the curve is active somewhere in its immediate neighborhood
    double active = 0.0;
    for (std::size_t j = (i == 0 ? 0 : i - 1);
         j < std::min(valid.size(), i + 3); ++j)
      active = std::max(active, std::abs(valid[j]->delta_shift - delta_t));
    if (active < zero_tol) continue;
    const double frac = g0 / (g0 - g1);
    Equilibrium eq;
    eq.t_p_star = valid[i]->t_p + frac * (valid[i + 1]->t_p - valid[i]->t_p);
    eq.slope = slope[i] + frac * (slope[i + 1] - slope[i]);
    eq.stability = classify(eq.slope);
    result.push_back(eq);
  }

  // terminal flat-zero region: later perturbations no longer affect timing.
  // Reported only when no sign-changing crossing already marks the entry
  // into the flat tail; classified by the approach slope from the left.
  if (delta_t == 0.0) {
    std::size_t tail = valid.size();
    while (tail > 0 && std::abs(valid[tail - 1]->delta_shift) < zero_tol) --tail;
    if (tail < valid.size() &&
        (result.empty() || result.back().t_p_star < valid[tail]->t_p)) {
      Equilibrium eq;
      eq.t_p_star = valid[tail]->t_p;
      eq.slope = slope[tail];
      eq.stability = classify(eq.slope);
      eq.boundary = true;
      result.push_back(eq);
    }
  }
  return result;
}

}  // namespace eventdf
