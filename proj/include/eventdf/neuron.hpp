#ifndef EVENTDF_NEURON_HPP
#define EVENTDF_NEURON_HPP

#include <cmath>
#include <stdexcept>

namespace eventdf {

/// Hodgkin-Huxley membrane parameters (mS/cm^2, mV, uF/cm^2).
struct NeuronParams {
  double c_m = 1.0;
  double gbar_na = 120.0;
  double gbar_k = 36.0;
  double gbar_l = 0.3;
  double e_na = 50.0;
  double e_k = -77.0;
  double e_l = -54.4;
  // Uniform scale on all gating rates (temperature-style factor). Values
  // below 1 slow channel kinetics relative to the membrane and synaptic
  // timescales without moving any equilibrium.
  double rate_scale = 0.35;

  void validate() const {
    if (c_m <= 0.0 || gbar_na <= 0.0 || gbar_k <= 0.0 || gbar_l <= 0.0)
      throw std::invalid_argument("capacitance and conductances must be positive");
    if (rate_scale <= 0.0)
      throw std::invalid_argument("rate_scale must be positive");
    if (!(e_na > e_l && e_l > e_k))
      throw std::invalid_argument("reversal potentials must satisfy E_Na > E_L > E_K");
  }
};

struct GateRates {
  double alpha_m, beta_m;
  double alpha_h, beta_h;
  double alpha_n, beta_n;
};

namespace detail {
// x / (1 - exp(-x/10)) with the removable singularity at x = 0 handled by
// a 2nd-order expansion; |x| < 1e-4 keeps the branch switch below 1e-12.
inline double expm_ratio(double x) {
  if (std::abs(x) < 1e-4) return 10.0 + 0.5 * x + x * x / 120.0;
  return x / -std::expm1(-x / 10.0);
}
}  // namespace detail

/// Standard modern-convention HH gating kinetics (rates in 1/ms).
inline GateRates gate_rates(double v) {
  GateRates r;
  r.alpha_m = 0.1 * detail::expm_ratio(v + 40.0);
  r.beta_m = 4.0 * std::exp(-(v + 65.0) / 18.0);
  r.alpha_h = 0.07 * std::exp(-(v + 65.0) / 20.0);
  r.beta_h = 1.0 / (1.0 + std::exp(-(v + 35.0) / 10.0));
  r.alpha_n = 0.01 * detail::expm_ratio(v + 55.0);
  r.beta_n = 0.125 * std::exp(-(v + 65.0) / 80.0);
  return r;
}

inline double gate_steady(double alpha, double beta) { return alpha / (alpha + beta); }

}  // namespace eventdf

#endif
