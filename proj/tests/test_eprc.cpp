#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "eventdf/eprc.hpp"

using namespace eventdf;

namespace {

NodeConfig rebound_node() {
  NodeConfig node;
  node.synapses = {SynapseParams::inhibitory()};
  return node;
}

PrcProtocol protocol_at(double t_n) {
  PrcProtocol protocol;
  protocol.t_n = t_n;
  return protocol;
}

// synthetic curve through the given (t_p, delta) pairs
PrcCurve synthetic_curve(const std::vector<std::pair<double, double>>& points) {
  PrcCurve curve;
  for (auto [tp, delta] : points) {
    PrcSample s;
    s.t_p = tp;
    s.delta_shift = delta;
    s.valid = true;
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace

TEST_SUITE_BEGIN("eprc");

TEST_CASE("nominal oscillation requires 1:1 locking") {
  const SteadyStateProtocol steady;
  const NominalOscillation nominal =
      nominal_oscillation(rebound_node(), 100.0, PrcMode::SingleEvent, steady);
  CHECK(nominal.t_n == 100.0);
  // single-event validity: periodic delay equals the isolated-event delay
  const double iso = isolated_event_delay(rebound_node(), steady.sim);
  CHECK(std::abs(nominal.output_delay - iso) < 0.02);

  CHECK_THROWS_AS(
      nominal_oscillation(rebound_node(), 30.0, PrcMode::SingleEvent, steady),
      NotLockedError);
}

TEST_CASE("default grid covers the preconditioning region") {
  const auto grid = PrcProtocol::default_grid(100.0);
  REQUIRE(!grid.empty());
  CHECK(grid.front() == -20.0);
  CHECK(grid.back() == doctest::Approx(100.0));
  CHECK(grid[1] - grid[0] == doctest::Approx(0.25));
}

TEST_CASE("null perturbation leaves the timing unchanged") {
  PrcProtocol protocol = protocol_at(100.0);
  protocol.perturbation = SynapseParams::excitatory(0.0);
  protocol.tp_grid = {-10.0, 0.0, 20.0, 45.0};
  const PrcCurve curve = sweep_eprc(rebound_node(), protocol);
  for (const auto& s : curve.samples) {
    REQUIRE(s.valid);
    CHECK(std::abs(s.delta_shift) < 0.02);
  }
}

TEST_CASE("causality and preconditioning decay") {
  PrcProtocol protocol = protocol_at(100.0);
  protocol.tp_grid = {-50.0, 46.0, 50.0};  // -5 tau_decay; past output + pulse
  const PrcCurve curve = sweep_eprc(rebound_node(), protocol);
  REQUIRE(curve.samples.size() == 3);
  CHECK(std::abs(curve.samples[0].delta_shift) < 0.05);
  CHECK(std::abs(curve.samples[1].delta_shift) < 0.02);
  CHECK(std::abs(curve.samples[2].delta_shift) < 0.02);
}

TEST_CASE("excitation near inhibition onset delays the rebound") {
  PrcProtocol protocol = protocol_at(100.0);
  protocol.tp_grid = {-12.0};
  const PrcCurve curve = sweep_eprc(rebound_node(), protocol);
  REQUIRE(curve.samples[0].valid);
  CHECK(curve.samples[0].delta_shift > 0.05);
}

TEST_CASE("curve structure: sign changes and mirrored polarity") {
  PrcProtocol protocol = protocol_at(100.0);
  for (double tp = -20.0; tp <= 50.0 + 1e-9; tp += 2.0)
    protocol.tp_grid.push_back(tp);
  const PrcCurve exc = sweep_eprc(rebound_node(), protocol);

  int sign_changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto& s : exc.samples) {
    if (!s.valid) continue;
    if (have_prev && s.delta_shift * prev < 0.0) ++sign_changes;
    if (std::abs(s.delta_shift) > 1e-3) {
      prev = s.delta_shift;
      have_prev = true;
    }
  }
  CHECK(sign_changes >= 2);
  // terminal zero region past the nominal output time
  const auto& tail = exc.samples.back();
  REQUIRE(tail.valid);
  CHECK(std::abs(tail.delta_shift) < 0.02);

  // inhibitory perturbation mirrors the excitatory curve where it is active
  protocol.perturbation = SynapseParams::inhibitory(0.02);
  const PrcCurve inh = sweep_eprc(rebound_node(), protocol);
  int active = 0, mirrored = 0;
  for (std::size_t i = 0; i < exc.samples.size(); ++i) {
    if (!exc.samples[i].valid || !inh.samples[i].valid) continue;
    if (std::abs(exc.samples[i].delta_shift) < 0.05) continue;
    ++active;
    if (exc.samples[i].delta_shift * inh.samples[i].delta_shift < 0.0) ++mirrored;
  }
  REQUIRE(active > 10);
  CHECK(mirrored >= active * 9 / 10);
}

TEST_CASE("grid validation") {
  PrcProtocol protocol = protocol_at(100.0);
  CHECK_THROWS_AS(sweep_eprc(rebound_node(), protocol), std::invalid_argument);
  protocol.tp_grid = {5.0, -5.0};
  CHECK_THROWS_AS(sweep_eprc(rebound_node(), protocol), std::invalid_argument);
}

TEST_CASE("equilibria of a synthetic curve") {
  // rises through zero at t_p = 2 (stable), falls through zero at t_p = 6
  // (unstable), then a flat zero tail from t_p = 10
  const PrcCurve curve = synthetic_curve({{0.0, -1.0},
                                          {2.0, -0.25},
                                          {4.0, 1.0},
                                          {5.0, 1.0},
                                          {7.0, -1.0},
                                          {8.0, -0.5},
                                          {9.0, -0.2},
                                          {10.0, 0.0},
                                          {12.0, 0.0},
                                          {14.0, 0.0}});
  const auto eqs = find_equilibria(curve, 0.0);
  REQUIRE(eqs.size() == 3);
  CHECK(eqs[0].t_p_star == doctest::Approx(2.4).epsilon(1e-6));
  CHECK(eqs[0].stability == Stability::Stable);
  CHECK(eqs[0].slope > 0.0);
  CHECK(eqs[1].t_p_star == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(eqs[1].stability == Stability::Unstable);
  CHECK(eqs[1].slope < 0.0);
  CHECK(eqs[2].boundary);
  CHECK(eqs[2].t_p_star == doctest::Approx(10.0));

  // a shift above the maximum eliminates all equilibria
  CHECK(find_equilibria(curve, 2.0).empty());

  // steep positive slopes are only marginally stable under the cycle map
  const PrcCurve steep = synthetic_curve(
      {{0.0, -3.0}, {0.9, -0.3}, {1.1, 0.3}, {2.0, 3.0}});
  const auto meqs = find_equilibria(steep, 0.0);
  REQUIRE(meqs.size() == 1);
  CHECK(meqs[0].stability == Stability::Marginal);
}

TEST_CASE("equilibrium shift consistency") {
  const PrcCurve curve = synthetic_curve(
      {{0.0, -2.0}, {2.0, -0.5}, {4.0, 1.0}, {6.0, 2.5}, {8.0, 1.0}, {10.0, -2.0}});
  const double c = 0.75;
  PrcCurve shifted = curve;
  for (auto& s : shifted.samples) s.delta_shift -= c;

  const auto direct = find_equilibria(curve, c);
  const auto via_shift = find_equilibria(shifted, 0.0);
  REQUIRE(direct.size() == via_shift.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(direct[i].t_p_star == doctest::Approx(via_shift[i].t_p_star).epsilon(1e-9));
}

TEST_CASE("equilibria need at least two valid samples") {
  PrcCurve curve = synthetic_curve({{0.0, 1.0}, {1.0, -1.0}});
  curve.samples[1].valid = false;
  CHECK_THROWS_AS(find_equilibria(curve, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
