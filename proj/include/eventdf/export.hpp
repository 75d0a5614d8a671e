#ifndef EVENTDF_EXPORT_HPP
#define EVENTDF_EXPORT_HPP

#include <iosfwd>
#include <string>

#include "eventdf/ring.hpp"

namespace eventdf {

/// EdfCurve CSV: `T,delta,phi,lock` rows. Non-locked samples carry empty
/// delta/phi fields; failed samples report `failed:<reason>` in the lock
/// column.
void write_edf_csv(std::ostream& out, const EdfCurve& curve);

/// Characteristics sidecar `{t_min, t_r, delta_inf, protocol, node_config_hash}`.
void write_edf_sidecar_json(std::ostream& out, const EdfCurve& curve,
                            const SteadyStateProtocol& protocol,
                            const std::string& config_hash,
                            const std::string& version);

/// PrcCurve CSV: `t_p,delta_shift,valid,fail_class`.
void write_prc_csv(std::ostream& out, const PrcCurve& curve);

void write_equilibria_json(std::ostream& out, const std::vector<Equilibrium>& eqs,
                           double delta_t, const std::string& config_hash,
                           const std::string& version);

/// RingResult JSON: `{period, locked, per_node_delays, n_cycles_measured}`.
void write_ring_result_json(std::ostream& out, const RingResult& result,
                            const std::string& config_hash,
                            const std::string& version);

/// Raster CSV: `node_index,event_time` rows.
void write_raster_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& rasters);

/// PredictionResult JSON: `{t_star, residual, unique}`.
void write_prediction_json(std::ostream& out, const PredictionResult& result,
                           const std::string& config_hash,
                           const std::string& version);

void write_entrainment_json(std::ostream& out, const EntrainmentReport& report,
                            double forcing_period, const std::string& config_hash,
                            const std::string& version);

}  // namespace eventdf

#endif
