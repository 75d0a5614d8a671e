#include "eventdf/export.hpp"

#include <cmath>
#include <ostream>

#include "eventdf/io.hpp"

namespace eventdf {

namespace {

void meta_fields(std::ostream& out, const std::string& config_hash,
                 const std::string& version) {
  out << "\"config_hash\": \"" << config_hash << "\", \"version\": \"" << version
      << "\"";
}

}  // namespace

void write_edf_csv(std::ostream& out, const EdfCurve& curve) {
  out << "T,delta,phi,lock\n";
  for (const auto& s : curve.samples) {
    out << format_double(s.period) << ",";
    if (!s.failed && s.lock == LockClass::Locked11)
      out << format_double(s.delta) << "," << format_double(s.phi);
    else
      out << ",";
    out << ",";
    if (s.failed)
      out << "failed:" << s.fail_reason;
    else
      out << to_string(s.lock);
    out << "\n";
  }
}

void write_edf_sidecar_json(std::ostream& out, const EdfCurve& curve,
                            const SteadyStateProtocol& protocol,
                            const std::string& config_hash,
                            const std::string& version) {
  const auto& c = curve.characteristics;
  out << "{\n";
  if (c.defined) {
    out << "  \"t_min\": " << format_double(c.t_min) << ",\n";
    out << "  \"t_r\": " << format_double(c.t_r) << ",\n";
    out << "  \"delta_inf\": " << format_double(c.delta_inf) << ",\n";
  } else {
    out << "  \"t_min\": null,\n  \"t_r\": null,\n  \"delta_inf\": null,\n";
  }
  out << "  \"protocol\": {\"n_transient\": " << protocol.n_transient
      << ", \"n_window\": " << protocol.n_window
      << ", \"delay_tol\": " << format_double(protocol.delay_tol)
      << ", \"flatness_tol\": " << format_double(protocol.flatness_tol)
      << ", \"dt\": " << format_double(protocol.sim.dt) << "},\n  ";
  meta_fields(out, config_hash, version);
  out << "\n}\n";
}

void write_prc_csv(std::ostream& out, const PrcCurve& curve) {
  out << "t_p,delta_shift,valid,fail_class\n";
  for (const auto& s : curve.samples) {
    out << format_double(s.t_p) << ",";
    if (s.valid)
      out << format_double(s.delta_shift) << ",1,";
    else
      out << ",0," << to_string(s.fail_class);
    out << "\n";
  }
}

void write_equilibria_json(std::ostream& out, const std::vector<Equilibrium>& eqs,
                           double delta_t, const std::string& config_hash,
                           const std::string& version) {
  out << "{\n  \"delta_t\": " << format_double(delta_t) << ",\n  \"equilibria\": [";
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (i) out << ",";
    out << "\n    {\"t_p_star\": " << format_double(eqs[i].t_p_star)
        << ", \"slope\": " << format_double(eqs[i].slope) << ", \"stability\": \""
        << to_string(eqs[i].stability) << "\", \"boundary\": "
        << (eqs[i].boundary ? "true" : "false") << "}";
  }
  out << "\n  ],\n  ";
  meta_fields(out, config_hash, version);
  out << "\n}\n";
}

void write_ring_result_json(std::ostream& out, const RingResult& result,
                            const std::string& config_hash,
                            const std::string& version) {
  out << "{\n  \"period\": " << format_double(result.period)
      << ",\n  \"locked\": " << (result.locked ? "true" : "false")
      << ",\n  \"per_node_delays\": [";
  for (std::size_t i = 0; i < result.per_node_delays.size(); ++i) {
    if (i) out << ", ";
    out << format_double(result.per_node_delays[i]);
  }
  out << "],\n  \"n_cycles_measured\": " << result.n_cycles_measured;
  if (!result.diagnostic.empty())
    out << ",\n  \"diagnostic\": \"" << result.diagnostic << "\"";
  out << ",\n  ";
  meta_fields(out, config_hash, version);
  out << "\n}\n";
}

void write_raster_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& rasters) {
  out << "node_index,event_time\n";
  for (std::size_t i = 0; i < rasters.size(); ++i)
    for (double t : rasters[i]) out << i << "," << format_double(t) << "\n";
}

void write_prediction_json(std::ostream& out, const PredictionResult& result,
                           const std::string& config_hash,
                           const std::string& version) {
  out << "{\n  \"t_star\": ";
  if (result.t_star)
    out << format_double(*result.t_star);
  else
    out << "null";
  out << ",\n  \"residual\": " << format_double(result.residual)
      << ",\n  \"unique\": " << (result.unique ? "true" : "false");
  if (!result.diagnostic.empty())
    out << ",\n  \"diagnostic\": \"" << result.diagnostic << "\"";
  out << ",\n  ";
  meta_fields(out, config_hash, version);
  out << "\n}\n";
}

void write_entrainment_json(std::ostream& out, const EntrainmentReport& report,
                            double forcing_period, const std::string& config_hash,
                            const std::string& version) {
  out << "{\n  \"forcing_period\": " << format_double(forcing_period)
      << ",\n  \"locked\": " << (report.locked ? "true" : "false")
      << ",\n  \"measured_lag\": ";
  if (report.measured_lag)
    out << format_double(*report.measured_lag);
  else
    out << "null";
  out << ",\n  \"drift_rate\": ";
  if (report.drift_rate && std::isfinite(*report.drift_rate))
    out << format_double(*report.drift_rate);
  else
    out << "null";
  out << ",\n  ";
  meta_fields(out, config_hash, version);
  out << "\n}\n";
}

}  // namespace eventdf
