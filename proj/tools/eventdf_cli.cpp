// Command-line front end: every analysis as a reproducible run,
// config in, CSV/JSON artifacts out.
//
// Exit codes: 0 ok, 2 configuration error, 3 simulation/analysis failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eventdf/export.hpp"
#include "eventdf/io.hpp"
#include "eventdf/parallel.hpp"
#include "run_config.hpp"

namespace {

using namespace eventdf;
using cli::RunConfig;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  return out;
}

// foo/bar.csv -> foo/bar + suffix
std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

std::vector<double> make_grid(double lo, double hi, double step,
                              const char* what) {
  if (step <= 0.0)
    throw std::invalid_argument(std::string(what) + " step must be positive");
  if (hi < lo)
    throw std::invalid_argument(std::string(what) + " range is empty");
  std::vector<double> grid;
  for (double x = lo; x <= hi + 1e-9; x += step) grid.push_back(x);
  return grid;
}

std::vector<double> period_grid(const RunConfig& cfg) {
  if (cfg.t_min <= 0.0) throw std::invalid_argument("period must be positive");
  return make_grid(cfg.t_min, cfg.t_max, cfg.t_step, "period");
}

NodeConfig make_node(const RunConfig& cfg) {
  NodeConfig node;
  node.neuron = cfg.neuron;
  node.synapses = {cfg.nominal};
  node.validate();
  return node;
}

SteadyStateProtocol make_protocol(const RunConfig& cfg) {
  SteadyStateProtocol protocol;
  protocol.sim = cfg.sim;
  return protocol;
}

// Flags shared by every subcommand that builds a node.
struct CommonFlags {
  RunConfig cfg;
  int jobs = 0;  // 0 -> default_jobs()
  std::string synapse_polarity;

  void attach(CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "worker threads (default: EVENTDF_JOBS or hardware)");
    cmd->add_option("--synapse", synapse_polarity,
                    "nominal synapse polarity: inhibitory|excitatory");
    cmd->add_option("--gbar", cfg.nominal.gbar_syn, "nominal synapse strength");
    cmd->add_option("--e-syn", cfg.nominal.e_syn, "nominal synapse reversal (mV)");
    cmd->add_option("--tau-rise", cfg.nominal.tau_rise, "synaptic rise constant (ms)");
    cmd->add_option("--tau-decay", cfg.nominal.tau_decay, "synaptic decay constant (ms)");
    cmd->add_option("--dt", cfg.sim.dt, "integration step (ms)");
    cmd->add_option("--t-end", cfg.sim.t_end, "simulation horizon (ms)");
  }

  // polarity resets e_syn; an explicit --e-syn afterwards still wins
  void finalize(CLI::App* cmd) {
    if (!synapse_polarity.empty()) {
      const double explicit_e = cfg.nominal.e_syn;
      if (synapse_polarity == "inhibitory")
        cfg.nominal.e_syn = SynapseParams::inhibitory().e_syn;
      else if (synapse_polarity == "excitatory")
        cfg.nominal.e_syn = SynapseParams::excitatory().e_syn;
      else
        throw std::invalid_argument("--synapse must be inhibitory or excitatory");
      if (cmd->count("--e-syn") > 0) cfg.nominal.e_syn = explicit_e;
    }
    cfg.nominal.validate();
    cfg.perturbation.validate();
  }
};

int cmd_edf(const CommonFlags& common, const std::string& out_path) {
  const RunConfig& cfg = common.cfg;
  const NodeConfig node = make_node(cfg);
  const SteadyStateProtocol protocol = make_protocol(cfg);
  const std::vector<double> grid = period_grid(cfg);
  const std::string hash = cli::config_hash(cfg);

  auto emit = [&](const EdfCurve& curve, const std::string& path) {
    auto csv = open_output(path);
    write_edf_csv(csv, curve);
    auto json = open_output(with_suffix(path, ".json"));
    write_edf_sidecar_json(json, curve, protocol, hash, cli::kVersion);
  };

  if (cfg.vary.empty()) {
    emit(sweep_edf(node, grid, protocol, common.jobs), out_path);
    return 0;
  }

  SweepParam param;
  if (cfg.vary == "tau-decay")
    param = SweepParam::TauDecay;
  else if (cfg.vary == "gbar-syn")
    param = SweepParam::GbarSyn;
  else
    throw std::invalid_argument("--vary must be tau-decay or gbar-syn");
  if (cfg.values.empty())
    throw std::invalid_argument("--vary requires --values");

  const auto curves =
      sweep_edf_parameters(node, param, cfg.values, grid, protocol, common.jobs);
  const auto dot = with_suffix(out_path, "");
  const std::string ext = out_path.substr(dot.size());
  for (const auto& [value, curve] : curves)
    emit(curve, dot + "_" + cfg.vary + "_" + format_double(value) + ext);
  return 0;
}

int cmd_eprc(const CommonFlags& common, const std::string& out_path,
             const std::vector<double>& delta_ts) {
  const RunConfig& cfg = common.cfg;
  const NodeConfig node = make_node(cfg);

  PrcProtocol protocol;
  protocol.t_n = cfg.t_n;
  protocol.mode = PrcMode::SingleEvent;
  protocol.perturbation = cfg.perturbation;
  protocol.tp_grid = make_grid(cfg.tp_min, cfg.tp_max, cfg.tp_step, "t_p");
  protocol.steady = make_protocol(cfg);

  const PrcCurve curve = sweep_eprc(node, protocol, common.jobs);
  const std::string hash = cli::config_hash(cfg);

  auto csv = open_output(out_path);
  write_prc_csv(csv, curve);

  for (double delta_t : delta_ts) {
    const auto eqs = find_equilibria(curve, delta_t);
    auto json = open_output(
        with_suffix(out_path, "_equilibria_" + format_double(delta_t) + ".json"));
    write_equilibria_json(json, eqs, delta_t, hash, cli::kVersion);
  }
  return 0;
}

struct RingFlags {
  int n = 2;
  double period_hint = 0.0;  // 0 -> 41 * n
  double forcing_period = 0.0;
  double forcing_gbar = 0.03;

  double hint() const { return period_hint > 0.0 ? period_hint : 41.0 * n; }
};

RingSpec make_ring(const RunConfig& cfg, const RingFlags& ring, double hint) {
  return make_homogeneous_ring(ring.n, make_node(cfg), hint);
}

SimConfig ring_sim(const RunConfig& cfg, const CLI::App* cmd, double hint) {
  SimConfig sim = cfg.sim;
  if (cmd->count("--t-end") == 0) sim.t_end = 30.0 * hint;
  return sim;
}

int cmd_ring(const std::string& sub, const CommonFlags& common,
             const RingFlags& ring, const CLI::App* cmd,
             const std::string& out_path) {
  const RunConfig& cfg = common.cfg;
  const std::string hash = cli::config_hash(cfg);

  auto predict = [&] {
    const NodeConfig node = make_node(cfg);
    const EdfCurve curve =
        sweep_edf(node, period_grid(cfg), make_protocol(cfg), common.jobs);
    return predict_ring_period(std::vector<EdfCurve>(ring.n, curve));
  };
  auto simulate = [&](double hint) {
    const RingSpec spec = make_ring(cfg, ring, hint);
    return simulate_ring(spec, ring_sim(cfg, cmd, hint));
  };

  if (sub == "predict") {
    auto json = open_output(out_path);
    write_prediction_json(json, predict(), hash, cli::kVersion);
    return 0;
  }
  if (sub == "simulate") {
    const RingResult result = simulate(ring.hint());
    auto json = open_output(out_path);
    write_ring_result_json(json, result, hash, cli::kVersion);
    auto raster = open_output(with_suffix(out_path, "_raster.csv"));
    write_raster_csv(raster, result.rasters);
    return 0;
  }
  if (sub == "drive") {
    if (ring.forcing_period <= 0.0)
      throw std::invalid_argument("ring drive requires --forcing-period");
    const RingResult free_run = simulate(ring.hint());
    if (!free_run.locked)
      throw std::runtime_error("ring fails to oscillate: " + free_run.diagnostic);
    SynapseParams forcing = cfg.perturbation;
    forcing.gbar_syn = ring.forcing_gbar;
    const RingSpec spec = make_ring(cfg, ring, ring.hint());
    const EntrainmentReport report =
        drive_ring(spec, forcing, ring.forcing_period, free_run.period, cfg.sim);
    auto json = open_output(out_path);
    write_entrainment_json(json, report, ring.forcing_period, hash, cli::kVersion);
    return 0;
  }
  // compare: predict + simulate, report relative error
  const PredictionResult prediction = predict();
  const double hint = prediction.t_star ? *prediction.t_star : ring.hint();
  const RingResult result = simulate(hint);
  auto json = open_output(out_path);
  json << "{\n  \"t_star\": ";
  if (prediction.t_star)
    json << format_double(*prediction.t_star);
  else
    json << "null";
  json << ",\n  \"t_net\": " << format_double(result.period)
       << ",\n  \"locked\": " << (result.locked ? "true" : "false")
       << ",\n  \"rel_error\": ";
  if (prediction.t_star && result.locked && result.period > 0.0)
    json << format_double(std::abs(result.period - *prediction.t_star) /
                          result.period);
  else
    json << "null";
  json << ",\n  \"config_hash\": \"" << hash << "\", \"version\": \""
       << cli::kVersion << "\"\n}\n";
  return 0;
}

int cmd_trace(const CommonFlags& common, const std::vector<double>& events,
              const std::string& out_path) {
  const RunConfig& cfg = common.cfg;
  const NodeConfig node = make_node(cfg);
  EventTrain train;
  train.times = events.empty() ? std::vector<double>{50.0} : events;
  train.validate();
  SimConfig sim = cfg.sim;
  sim.record_trace = true;
  const SimOutput out = simulate_node(node, {train}, sim);
  auto csv = open_output(out_path);
  write_trace_csv(csv, *out.trace);
  return 0;
}

// The config file must be loaded before CLI11 assigns flag values, so that
// flags override the file; scan argv by hand.
void preload_config(int argc, char** argv, RunConfig& cfg) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      cli::load_toml(argv[i + 1], cfg);
      return;
    }
    if (arg.rfind("--config=", 0) == 0) {
      cli::load_toml(arg.substr(9), cfg);
      return;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-based analysis of excitable systems"};
  app.require_subcommand(1);

  CommonFlags common;
  try {
    preload_config(argc, argv, common.cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  common.jobs = default_jobs();

  std::string config_path, out_path;
  std::vector<double> delta_ts, trace_events;
  RingFlags ring;
  std::string perturb_polarity;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "TOML config file (flags override)");
    cmd->add_option("--out", out_path, "output file path")->required();
    common.attach(cmd);
  };

  CLI::App* edf = app.add_subcommand("edf", "event describing function sweep");
  add_common(edf);
  edf->add_option("--t-min", common.cfg.t_min, "smallest input period (ms)");
  edf->add_option("--t-max", common.cfg.t_max, "largest input period (ms)");
  edf->add_option("--t-step", common.cfg.t_step, "period grid step (ms)");
  edf->add_option("--vary", common.cfg.vary, "parameter sweep: tau-decay|gbar-syn");
  edf->add_option("--values", common.cfg.values, "parameter values for --vary")
      ->delimiter(',');

  CLI::App* eprc = app.add_subcommand("eprc", "event phase response curve");
  add_common(eprc);
  eprc->add_option("--t-n", common.cfg.t_n, "nominal period (ms)");
  eprc->add_option("--perturb", perturb_polarity,
                   "perturbation polarity: excitatory|inhibitory");
  eprc->add_option("--perturb-gbar", common.cfg.perturbation.gbar_syn,
                   "perturbation strength");
  eprc->add_option("--tp-min", common.cfg.tp_min, "smallest t_p offset (ms)");
  eprc->add_option("--tp-max", common.cfg.tp_max, "largest t_p offset (ms)");
  eprc->add_option("--tp-step", common.cfg.tp_step, "t_p grid step (ms)");
  eprc->add_option("--delta-t", delta_ts,
                   "frequency-mismatch shift for equilibria (repeatable)");

  CLI::App* ring_cmd = app.add_subcommand("ring", "ring network analyses");
  ring_cmd->require_subcommand(1);
  std::vector<CLI::App*> ring_subs;
  for (const char* name : {"predict", "simulate", "drive", "compare"}) {
    CLI::App* sub = ring_cmd->add_subcommand(name);
    add_common(sub);
    sub->add_option("--n", ring.n, "number of nodes")->check(CLI::Range(2, 64));
    sub->add_option("--period-hint", ring.period_hint, "kickstart spacing (ms)");
    sub->add_option("--t-min", common.cfg.t_min, "eDF grid start (ms)");
    sub->add_option("--t-max", common.cfg.t_max, "eDF grid end (ms)");
    sub->add_option("--t-step", common.cfg.t_step, "eDF grid step (ms)");
    sub->add_option("--forcing-period", ring.forcing_period, "forcing period (ms)");
    sub->add_option("--forcing-gbar", ring.forcing_gbar, "forcing strength");
    ring_subs.push_back(sub);
  }

  CLI::App* trace = app.add_subcommand("trace", "single-run dense trace export");
  add_common(trace);
  trace->add_option("--event", trace_events, "input event time (ms, repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    common.finalize(active->get_subcommands().empty()
                        ? active
                        : active->get_subcommands().front());
    if (!perturb_polarity.empty()) {
      const double g = common.cfg.perturbation.gbar_syn;
      if (perturb_polarity == "excitatory")
        common.cfg.perturbation.e_syn = SynapseParams::excitatory().e_syn;
      else if (perturb_polarity == "inhibitory")
        common.cfg.perturbation.e_syn = SynapseParams::inhibitory().e_syn;
      else
        throw std::invalid_argument("--perturb must be excitatory or inhibitory");
      common.cfg.perturbation.gbar_syn = g;
    }

    if (edf->parsed()) return cmd_edf(common, out_path);
    if (eprc->parsed()) return cmd_eprc(common, out_path, delta_ts);
    if (ring_cmd->parsed()) {
      CLI::App* sub = ring_cmd->get_subcommands().front();
      return cmd_ring(sub->get_name(), common, ring, sub, out_path);
    }
    return cmd_trace(common, trace_events, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
