#include <cmath>
#include <random>

#include "doctest.h"
#include "eventdf/event_train.hpp"
#include "eventdf/node.hpp"

using namespace eventdf;

TEST_SUITE_BEGIN("core");

TEST_CASE("gating rates at reference voltages") {
  // alpha_m and alpha_n sit exactly on their removable singularities
  const GateRates at_m = gate_rates(-40.0);
  CHECK(at_m.alpha_m == doctest::Approx(1.0).epsilon(1e-12));
  const GateRates at_n = gate_rates(-55.0);
  CHECK(at_n.alpha_n == doctest::Approx(0.1).epsilon(1e-12));

  const GateRates at_rest = gate_rates(-65.0);
  CHECK(at_rest.beta_m == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(at_rest.alpha_h == doctest::Approx(0.07).epsilon(1e-12));
  const GateRates at_35 = gate_rates(-35.0);
  CHECK(at_35.beta_h == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("singularity expansion is continuous with the direct branch") {
  // long-double oracle for x / (1 - exp(-x/10)) just outside the switch,
  // written via expm1 to avoid cancellation in the oracle itself
  for (double x : {1.001e-4, -1.001e-4, 2e-4, -2e-4}) {
    const long double lx = x;
    const long double direct = lx / -std::expm1(-lx / 10.0L);
    CHECK(detail::expm_ratio(x) ==
          doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  }
  // inside the switch the expansion agrees with the limit to high order
  CHECK(detail::expm_ratio(0.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(detail::expm_ratio(5e-5) - detail::expm_ratio(-5e-5) ==
        doctest::Approx(5e-5).epsilon(1e-9));
}

TEST_CASE("gating steady states stay inside (0,1)") {
  for (double v = -120.0; v <= 60.0; v += 0.5) {
    const GateRates r = gate_rates(v);
    for (auto [a, b] : {std::pair{r.alpha_m, r.beta_m},
                        std::pair{r.alpha_h, r.beta_h},
                        std::pair{r.alpha_n, r.beta_n}}) {
      const double x = gate_steady(a, b);
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("resting potential balances the silent membrane") {
  const NeuronParams params;
  const double v_rest = resting_potential(params);
  CHECK(v_rest == doctest::Approx(-64.9997).epsilon(1e-5));

  // all derivatives vanish at the resting state with silent inputs
  NodeConfig node;
  node.synapses = {SynapseParams::inhibitory()};
  const Eigen::VectorXd rest = resting_state(node);
  Eigen::VectorXd v_pre(1), dxdt;
  v_pre[0] = -65.0;  // baseline presynaptic voltage
  membrane_rhs(node, rest, v_pre, dxdt);
  CHECK(std::abs(dxdt[kVoltIdx]) < 1e-9);
  CHECK(std::abs(dxdt[kGateMIdx]) < 1e-9);
  CHECK(std::abs(dxdt[kGateHIdx]) < 1e-9);
  CHECK(std::abs(dxdt[kGateNIdx]) < 1e-9);
  CHECK(std::abs(dxdt[kSynIdx]) < 1e-6);  // sigma(-65) is tiny but nonzero
}

TEST_CASE("membrane currents recomputed independently") {
  NodeConfig node;
  node.synapses = {SynapseParams::inhibitory(1.3), SynapseParams::excitatory(0.7)};

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> volt(-90.0, 40.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(6), v_pre(2), dxdt;
    x << volt(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng);
    v_pre << volt(rng), volt(rng);
    membrane_rhs(node, x, v_pre, dxdt);

    // term-by-term long-double oracle
    const NeuronParams& p = node.neuron;
    const long double v = x[0], m = x[1], h = x[2], n = x[3];
    long double i = p.gbar_na * m * m * m * h * (v - p.e_na) +
                    p.gbar_k * n * n * n * n * (v - p.e_k) +
                    p.gbar_l * (v - p.e_l);
    for (int j = 0; j < 2; ++j)
      i += node.synapses[j].gbar_syn * static_cast<long double>(x[4 + j]) *
           (v - node.synapses[j].e_syn);
    CHECK(dxdt[kVoltIdx] ==
          doctest::Approx(static_cast<double>(-i / p.c_m)).epsilon(1e-12));

    const GateRates r = gate_rates(x[0]);
    CHECK(dxdt[kGateMIdx] ==
          doctest::Approx(p.rate_scale * (r.alpha_m * (1.0 - x[1]) - r.beta_m * x[1]))
              .epsilon(1e-12));
    for (int j = 0; j < 2; ++j)
      CHECK(dxdt[kSynIdx + j] ==
            doctest::Approx(synapse_activation_rhs(node.synapses[j], x[4 + j],
                                                   v_pre[j]))
                .epsilon(1e-12));
  }
}

TEST_CASE("rate_scale scales gate kinetics only") {
  NodeConfig slow, fast;
  fast.neuron.rate_scale = 2.0 * slow.neuron.rate_scale;
  Eigen::VectorXd x(4), v_pre(0), d_slow, d_fast;
  x << -50.0, 0.3, 0.4, 0.5;
  membrane_rhs(slow, x, v_pre, d_slow);
  membrane_rhs(fast, x, v_pre, d_fast);
  CHECK(d_fast[kVoltIdx] == d_slow[kVoltIdx]);
  for (int i : {kGateMIdx, kGateHIdx, kGateNIdx})
    CHECK(d_fast[i] == doctest::Approx(2.0 * d_slow[i]).epsilon(1e-12));
}

TEST_CASE("synapse kinetics") {
  const SynapseParams syn = SynapseParams::inhibitory();
  CHECK(syn.beta() == doctest::Approx(1.0 / syn.tau_decay));
  CHECK(syn.alpha() == doctest::Approx(1.0 / syn.tau_rise - syn.beta()));

  // activation rises under a presynaptic spike, decays at baseline
  CHECK(synapse_activation_rhs(syn, 0.0, 40.0) > 0.0);
  CHECK(synapse_activation_rhs(syn, 0.5, -65.0) < 0.0);
  // h = 1 cannot be exceeded even under sustained drive
  CHECK(synapse_activation_rhs(syn, 1.0, 40.0) <= 0.0);

  CHECK(SynapseParams::excitatory().e_syn == 0.0);
  CHECK(SynapseParams::inhibitory().e_syn == -100.0);
  CHECK(SynapseParams::excitatory(0.5).gbar_syn == 0.5);
}

TEST_CASE("parameter validation") {
  SynapseParams syn;
  syn.tau_decay = 0.3;  // below tau_rise
  CHECK_THROWS_AS(syn.validate(), std::invalid_argument);
  syn = SynapseParams{};
  syn.gbar_syn = -1.0;
  CHECK_THROWS_AS(syn.validate(), std::invalid_argument);

  NeuronParams neuron;
  neuron.c_m = 0.0;
  CHECK_THROWS_AS(neuron.validate(), std::invalid_argument);
  neuron = NeuronParams{};
  neuron.e_k = 60.0;  // violates E_Na > E_L > E_K
  CHECK_THROWS_AS(neuron.validate(), std::invalid_argument);
  neuron = NeuronParams{};
  neuron.rate_scale = 0.0;
  CHECK_THROWS_AS(neuron.validate(), std::invalid_argument);
}

TEST_CASE("event trains") {
  const EventTrain train = EventTrain::periodic(5.0, 20.0, 3);
  REQUIRE(train.times.size() == 3);
  CHECK(train.times[2] == doctest::Approx(45.0));
  CHECK_NOTHROW(train.validate());

  // pulse is active on the half-open interval [t_i, t_i + width)
  CHECK(presynaptic_waveform(train, 4.999) == train.baseline);
  CHECK(presynaptic_waveform(train, 5.0) == train.pulse_amplitude);
  CHECK(presynaptic_waveform(train, 5.0 + train.pulse_width - 1e-9) ==
        train.pulse_amplitude);
  CHECK(presynaptic_waveform(train, 5.0 + train.pulse_width) == train.baseline);

  EventTrain tight;
  tight.times = {10.0, 12.0};  // gap below the default pulse width
  CHECK_THROWS_AS(tight.validate(), std::invalid_argument);
  tight.pulse_width = 1.0;
  CHECK_NOTHROW(tight.validate());
}

TEST_SUITE_END();
