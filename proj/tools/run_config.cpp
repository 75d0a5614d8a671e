#include "run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eventdf/io.hpp"

namespace eventdf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config value for '" + key + "' is not a number: " + value);
  }
}

std::string parse_string(const std::string& value, const std::string& key) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    return value.substr(1, value.size() - 2);
  throw std::invalid_argument("config value for '" + key + "' must be a quoted string");
}

std::vector<double> parse_array(const std::string& value, const std::string& key) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']')
    throw std::invalid_argument("config value for '" + key + "' must be an array");
  std::vector<double> out;
  std::stringstream ss(value.substr(1, value.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(item, key));
  }
  return out;
}

void apply_polarity(SynapseParams& syn, const std::string& polarity,
                    const std::string& key) {
  if (polarity == "inhibitory")
    syn.e_syn = SynapseParams::inhibitory().e_syn;
  else if (polarity == "excitatory")
    syn.e_syn = SynapseParams::excitatory().e_syn;
  else
    throw std::invalid_argument("config value for '" + key +
                                "' must be \"inhibitory\" or \"excitatory\"");
}

void apply_synapse(SynapseParams& syn, const std::string& key,
                   const std::string& value, const std::string& full_key) {
  if (key == "polarity")
    apply_polarity(syn, parse_string(value, full_key), full_key);
  else if (key == "gbar_syn")
    syn.gbar_syn = parse_number(value, full_key);
  else if (key == "e_syn")
    syn.e_syn = parse_number(value, full_key);
  else if (key == "tau_rise")
    syn.tau_rise = parse_number(value, full_key);
  else if (key == "tau_decay")
    syn.tau_decay = parse_number(value, full_key);
  else if (key == "v_th")
    syn.v_th = parse_number(value, full_key);
  else if (key == "k_slope")
    syn.k_slope = parse_number(value, full_key);
  else
    throw std::invalid_argument("unknown config key '" + full_key + "'");
}

}  // namespace

void load_toml(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);

  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                    ": malformed table header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full_key = section.empty() ? key : section + "." + key;

    if (section == "neuron") {
      NeuronParams& p = config.neuron;
      if (key == "c_m") p.c_m = parse_number(value, full_key);
      else if (key == "gbar_na") p.gbar_na = parse_number(value, full_key);
      else if (key == "gbar_k") p.gbar_k = parse_number(value, full_key);
      else if (key == "gbar_l") p.gbar_l = parse_number(value, full_key);
      else if (key == "e_na") p.e_na = parse_number(value, full_key);
      else if (key == "e_k") p.e_k = parse_number(value, full_key);
      else if (key == "e_l") p.e_l = parse_number(value, full_key);
      else if (key == "rate_scale") p.rate_scale = parse_number(value, full_key);
      else throw std::invalid_argument("unknown config key '" + full_key + "'");
    } else if (section == "synapse.nominal") {
      apply_synapse(config.nominal, key, value, full_key);
    } else if (section == "synapse.perturbation") {
      apply_synapse(config.perturbation, key, value, full_key);
    } else if (section == "sim") {
      SimConfig& s = config.sim;
      if (key == "dt") s.dt = parse_number(value, full_key);
      else if (key == "t_end") s.t_end = parse_number(value, full_key);
      else if (key == "spike_threshold") s.spike_threshold = parse_number(value, full_key);
      else if (key == "refractory_min") s.refractory_min = parse_number(value, full_key);
      else throw std::invalid_argument("unknown config key '" + full_key + "'");
    } else if (section == "sweep") {
      if (key == "t_min") config.t_min = parse_number(value, full_key);
      else if (key == "t_max") config.t_max = parse_number(value, full_key);
      else if (key == "t_step") config.t_step = parse_number(value, full_key);
      else if (key == "tp_min") config.tp_min = parse_number(value, full_key);
      else if (key == "tp_max") config.tp_max = parse_number(value, full_key);
      else if (key == "tp_step") config.tp_step = parse_number(value, full_key);
      else if (key == "t_n") config.t_n = parse_number(value, full_key);
      else if (key == "vary") config.vary = parse_string(value, full_key);
      else if (key == "values") config.values = parse_array(value, full_key);
      else throw std::invalid_argument("unknown config key '" + full_key + "'");
    } else {
      throw std::invalid_argument("unknown config table '" + section + "'");
    }
  }
}

std::string canonical_string(const RunConfig& c) {
  std::ostringstream out;
  auto num = [&](const char* key, double v) {
    out << key << "=" << format_double(v) << ";";
  };
  const NeuronParams& p = c.neuron;
  num("c_m", p.c_m); num("gbar_na", p.gbar_na); num("gbar_k", p.gbar_k);
  num("gbar_l", p.gbar_l); num("e_na", p.e_na); num("e_k", p.e_k);
  num("e_l", p.e_l); num("rate_scale", p.rate_scale);
  auto syn = [&](const char* tag, const SynapseParams& s) {
    out << tag << ":";
    num("gbar_syn", s.gbar_syn); num("e_syn", s.e_syn);
    num("tau_rise", s.tau_rise); num("tau_decay", s.tau_decay);
    num("v_th", s.v_th); num("k_slope", s.k_slope);
  };
  syn("nominal", c.nominal);
  syn("perturbation", c.perturbation);
  num("dt", c.sim.dt); num("t_end", c.sim.t_end);
  num("spike_threshold", c.sim.spike_threshold);
  num("refractory_min", c.sim.refractory_min);
  num("t_min", c.t_min); num("t_max", c.t_max); num("t_step", c.t_step);
  num("tp_min", c.tp_min); num("tp_max", c.tp_max); num("tp_step", c.tp_step);
  num("t_n", c.t_n);
  out << "vary=" << c.vary << ";values=";
  for (double v : c.values) out << format_double(v) << ",";
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  return hash_hex(fnv1a(canonical_string(config)));
}

}  // namespace eventdf::cli
