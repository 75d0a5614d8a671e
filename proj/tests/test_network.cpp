#include <cmath>
#include <numeric>

#include "doctest.h"
#include "eventdf/ring.hpp"

using namespace eventdf;

namespace {

NodeConfig inhibitory_node() {
  NodeConfig node;
  node.synapses = {SynapseParams::inhibitory()};
  return node;
}

NodeConfig excitatory_node() {
  NodeConfig node;
  node.synapses = {SynapseParams::excitatory()};
  return node;
}

// constant-phi curve over a period grid
EdfCurve flat_curve(double phi, double lo, double hi, double step) {
  EdfCurve curve;
  for (double t = lo; t <= hi + 1e-9; t += step) {
    EdfSample s;
    s.period = t;
    s.delta = phi * t;
    s.phi = phi;
    s.lock = LockClass::Locked11;
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace

TEST_SUITE_BEGIN("network");

TEST_CASE("ring spec validation") {
  RingSpec spec;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // no nodes

  spec = make_homogeneous_ring(2, inhibitory_node(), 80.0);
  CHECK_NOTHROW(spec.validate());
  spec.kick_node = 5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  CHECK_THROWS_AS(make_homogeneous_ring(1, inhibitory_node(), 80.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_homogeneous_ring(2, inhibitory_node(), -1.0),
                  std::invalid_argument);

  RingSpec no_syn;
  no_syn.nodes.assign(2, NodeConfig{});
  no_syn.kickstart.times = {5.0};
  CHECK_THROWS_AS(no_syn.validate(), std::invalid_argument);
}

TEST_CASE("prediction on synthetic flat curves") {
  // phi_1 + phi_2 = 1 everywhere: a solution exists but is not unique
  const std::vector<EdfCurve> curves = {flat_curve(0.3, 50.0, 60.0, 1.0),
                                        flat_curve(0.7, 50.0, 60.0, 1.0)};
  const PredictionResult result = predict_ring_period(curves);
  REQUIRE(result.t_star.has_value());
  CHECK(result.residual < 1e-9);
  CHECK(!result.unique);

  // sum stays below 1: no solution, reported without error
  const PredictionResult none =
      predict_ring_period({flat_curve(0.2, 50.0, 60.0, 1.0),
                           flat_curve(0.2, 50.0, 60.0, 1.0)});
  CHECK(!none.t_star.has_value());
  CHECK(!none.diagnostic.empty());
}

TEST_CASE("prediction rejects disjoint locked ranges") {
  CHECK_THROWS_AS(predict_ring_period({flat_curve(0.5, 50.0, 60.0, 1.0),
                                       flat_curve(0.5, 70.0, 80.0, 1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(predict_ring_period({}), std::invalid_argument);
}

TEST_CASE("half-center oscillator locks in antiphase") {
  const RingSpec spec = make_homogeneous_ring(2, inhibitory_node(), 82.0);
  SimConfig sim;
  sim.t_end = 2500.0;
  const RingResult result = simulate_ring(spec, sim);
  REQUIRE(result.locked);
  // golden network period, frozen from the first verified run at defaults
  CHECK(result.period == doctest::Approx(82.6612).epsilon(1e-4));

  // ring phase closure: edge delays compose to one full period
  const double sum = std::accumulate(result.per_node_delays.begin(),
                                     result.per_node_delays.end(), 0.0);
  CHECK(std::abs(sum - result.period) < 0.1);

  // antiphase: the two edge delays are equal by symmetry
  CHECK(std::abs(result.per_node_delays[0] - result.per_node_delays[1]) < 0.1);
}

TEST_CASE("excitatory two-ring cannot sustain a rhythm") {
  const RingSpec spec = make_homogeneous_ring(2, excitatory_node(), 10.0);
  SimConfig sim;
  sim.t_end = 1500.0;
  const RingResult result = simulate_ring(spec, sim);
  CHECK(!result.locked);
  CHECK(!result.diagnostic.empty());
}

TEST_CASE("ring simulation is deterministic") {
  const RingSpec spec = make_homogeneous_ring(2, inhibitory_node(), 82.0);
  SimConfig sim;
  sim.t_end = 1000.0;
  const RingResult a = simulate_ring(spec, sim);
  const RingResult b = simulate_ring(spec, sim);
  CHECK(a.rasters == b.rasters);
}

TEST_CASE("null-coupling forcing drifts at exactly the period mismatch") {
  const RingSpec spec = make_homogeneous_ring(2, inhibitory_node(), 82.0);
  SimConfig sim;
  sim.t_end = 2500.0;
  const RingResult free_run = simulate_ring(spec, sim);
  REQUIRE(free_run.locked);

  const double delta_t = 1.5;
  const EntrainmentReport report =
      drive_ring(spec, SynapseParams::excitatory(0.0),
                 free_run.period + delta_t, free_run.period, sim);
  CHECK(!report.locked);
  REQUIRE(report.drift_rate.has_value());
  CHECK(*report.drift_rate == doctest::Approx(-delta_t).epsilon(1e-3));
}

TEST_CASE("drive_ring validates the forcing period") {
  const RingSpec spec = make_homogeneous_ring(2, inhibitory_node(), 82.0);
  SimConfig sim;
  CHECK_THROWS_AS(drive_ring(spec, SynapseParams::excitatory(0.02), -5.0, 82.0, sim),
                  std::invalid_argument);
}

TEST_CASE("ring ePRC rejects an empty grid") {
  const RingSpec spec = make_homogeneous_ring(2, inhibitory_node(), 82.0);
  SimConfig sim;
  sim.t_end = 2500.0;
  CHECK_THROWS_AS(ring_eprc(spec, SynapseParams::excitatory(0.03), {}, sim),
                  std::invalid_argument);
}

TEST_SUITE_END();
