#include "fdmsnn/config.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fdmsnn {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (engine != "reference" && engine != "circuit") throw std::invalid_argument("config: engine must be 'reference' or 'circuit'");
  if (device != "ideal" && device != "hfo2" && device != "quadratic") throw std::invalid_argument("config: device must be ideal|hfo2|quadratic");
  if (device == "quadratic" && engine != "reference") throw std::invalid_argument("config: the quadratic device runs on the reference engine");
  if (epochs < 0) throw std::invalid_argument("config: epochs must be >= 0");
  if (!(presentation_s > 0.0)) throw std::invalid_argument("config: presentation length must be positive");
  if (pump_law != "rate" && pump_law != "peak") throw std::invalid_argument("config: pump_law must be rate|peak");
  if (!(train_fraction > 0.0) && epochs > 0) throw std::invalid_argument("config: train fraction must be positive");
  alpha.validate();
  read.validate();
  pre_pulse.validate();
  post_pulse.validate();
  hpf.validate();
  input_lif.validate();
  output_lif.validate();
  stdp.validate();
  encoder.validate();
  device_params().validate();
}

DeviceParams ExperimentConfig::device_params() const {
  DeviceParams d;
  if (device == "ideal") d.model = DeviceModel::ideal;
  if (device == "hfo2") d.model = DeviceModel::hfo2;
  if (device == "quadratic") d.model = DeviceModel::quadratic;
  d.ideal = ideal_rram;
  d.hfo2 = hfo2;
  d.quadratic = quadratic;
  d.pump.law = pump_law == "peak" ? PumpLaw::peak : PumpLaw::rate;
  d.pump.saturation_p = saturation_p;
  if (pump_gain_set > 0.0 && pump_gain_reset > 0.0) {
    d.pump.gain_set = pump_gain_set;
    d.pump.gain_reset = pump_gain_reset;
  } else if (d.pump.law == PumpLaw::peak) {
    derive_pump_gains(d, stdp.a_plus, stdp.tau_plus_s, stdp.a_minus, stdp.tau_minus_s, pre_pulse, post_pulse);
  }
  return d;
}

EngineConfig ExperimentConfig::engine_config() const {
  EngineConfig e;
  e.rows = encoder.total_fields();
  e.cols = 3;
  e.dt_s = dt_s;
  e.read = read;
  e.pre_pulse = pre_pulse;
  e.post_pulse = post_pulse;
  e.t_offset_s = t_offset_s;
  e.hpf = hpf;
  e.filter_enabled = filter_enabled;
  e.envelope_skip_periods = envelope_skip_periods;
  e.device = device_params();
  e.input_lif = input_lif;
  e.output_lif = output_lif;
  e.alpha = alpha;
  e.kappa = kappa;
  e.parallel_min_devices = parallel_min_devices;
  return e;
}

RefConfig ExperimentConfig::ref_config() const {
  RefConfig r;
  r.rows = encoder.total_fields();
  r.cols = 3;
  r.dt_s = dt_s;
  r.input_lif = input_lif;
  r.output_lif = output_lif;
  r.alpha = alpha;
  r.stdp = stdp;
  r.read_model = device == "quadratic" ? ReadModel::eq7_quadratic : ReadModel::ideal;
  r.eq7_amplitude_v = quad_amplitudes_v.empty() ? 0.3 : quad_amplitudes_v.back();
  r.quadratic = quadratic;
  r.plasticity = device == "hfo2" ? PlasticityModel::device_backed : PlasticityModel::pair_rule;
  r.device = device_params();
  r.pre_pulse = pre_pulse;
  r.post_pulse = post_pulse;
  r.t_offset_s = t_offset_s;
  return r;
}

TrainOptions ExperimentConfig::train_options() const {
  TrainOptions o;
  o.epochs = fast ? std::min(epochs, 5) : epochs;
  o.seed = seed;
  o.presentation_s = presentation_s;
  o.train_fraction = train_fraction;
  o.encoder = encoder;
  o.teacher.excite_a = teacher_excite_a;
  o.teacher.inhibit_a = teacher_inhibit_a;
  o.init_lo = init_weight_lo;
  o.init_hi = init_weight_hi;
  o.curriculum = curriculum;
  o.reshuffle_each_epoch = reshuffle_each_epoch;
  return o;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["engine"] = c.engine;
  j["device"] = c.device;
  j["seed"] = c.seed;
  j["epochs"] = c.epochs;
  j["fast"] = c.fast;
  j["out_dir"] = c.out_dir;
  j["dt_s"] = c.dt_s;
  j["presentation_s"] = c.presentation_s;
  j["signals"] = {
      {"alpha", {{"tau1_s", c.alpha.tau1_s}, {"tau2_s", c.alpha.tau2_s}, {"v0", c.alpha.v0}}},
      {"read",
       {{"amplitude_v", c.read.amplitude_v},
        {"period_s", c.read.period_s},
        {"duration_s", c.read.duration_s},
        {"global_phase", c.read.global_phase}}},
      {"pre_pulse",
       {{"amplitude_v", c.pre_pulse.amplitude_v}, {"period_s", c.pre_pulse.period_s}, {"tau_tail_s", c.pre_pulse.tau_tail_s}}},
      {"post_pulse",
       {{"amplitude_v", c.post_pulse.amplitude_v}, {"period_s", c.post_pulse.period_s}, {"tau_tail_s", c.post_pulse.tau_tail_s}}},
      {"hpf", {{"omega_3db_rad_s", c.hpf.omega_3db_rad_s}, {"order", c.hpf.order}}}};
  j["neuron"] = {
      {"input",
       {{"capacitance_f", c.input_lif.capacitance_f},
        {"leak_conductance_s", c.input_lif.leak_conductance_s},
        {"v_threshold", c.input_lif.v_threshold},
        {"v_reset", c.input_lif.v_reset},
        {"tau_refractory_s", c.input_lif.tau_refractory_s}}},
      {"output",
       {{"capacitance_f", c.output_lif.capacitance_f},
        {"leak_conductance_s", c.output_lif.leak_conductance_s},
        {"v_threshold", c.output_lif.v_threshold},
        {"v_reset", c.output_lif.v_reset},
        {"tau_refractory_s", c.output_lif.tau_refractory_s}}}};
  j["stdp"] = {{"a_plus", c.stdp.a_plus},   {"a_minus", c.stdp.a_minus}, {"tau_plus_s", c.stdp.tau_plus_s},
               {"tau_minus_s", c.stdp.tau_minus_s}, {"p", c.stdp.p},     {"g_max", c.stdp.g_max}};
  j["device_params"] = {
      {"ideal",
       {{"c_state_f", c.ideal_rram.c_state_f},
        {"v_tp", c.ideal_rram.v_tp},
        {"v_tn", c.ideal_rram.v_tn},
        {"g_max", c.ideal_rram.g_max},
        {"pump_gain", c.ideal_rram.pump_gain}}},
      {"hfo2",
       {{"v_c_min", c.hfo2.v_c_min}, {"v_c_max", c.hfo2.v_c_max}, {"area_scale", c.hfo2.area_scale}}},
      {"quadratic", {{"k", c.quadratic.k}, {"v_ref", c.quadratic.v_ref}}},
      {"pump",
       {{"law", c.pump_law},
        {"gain_set", c.pump_gain_set},
        {"gain_reset", c.pump_gain_reset},
        {"saturation_p", c.saturation_p}}}};
  j["engine_params"] = {{"t_offset_s", c.t_offset_s},
                        {"envelope_skip_periods", c.envelope_skip_periods},
                        {"filter_enabled", c.filter_enabled},
                        {"kappa", c.kappa},
                        {"parallel_min_devices", c.parallel_min_devices},
                        {"trace_decimation", c.trace_decimation}};
  j["iris"] = {{"fields_per_attribute", c.encoder.fields_per_attribute},
               {"sigma", c.encoder.sigma},
               {"i_max_a", c.encoder.i_max_a},
               {"teacher_excite_a", c.teacher_excite_a},
               {"teacher_inhibit_a", c.teacher_inhibit_a},
               {"train_fraction", c.train_fraction},
               {"init_weight_lo", c.init_weight_lo},
               {"init_weight_hi", c.init_weight_hi},
               {"curriculum", c.curriculum},
               {"reshuffle_each_epoch", c.reshuffle_each_epoch},
               {"data_path", c.data_path}};
  j["validation"] = {{"n_events", c.validation_events},
                     {"isi_min_s", c.isi_min_s},
                     {"isi_max_s", c.isi_max_s},
                     {"stdp_delta_ts_ms", c.stdp_delta_ts_ms},
                     {"quad_amplitudes_v", c.quad_amplitudes_v}};
  return j;
}

namespace {

void reject_unknown_keys(const json& given, const json& schema, const std::string& prefix) {
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.contains(it.key())) {
      throw std::invalid_argument("config: unknown key '" + path + "'");
    }
    if (it.value().is_object() && schema[it.key()].is_object()) {
      reject_unknown_keys(it.value(), schema[it.key()], path);
    }
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

const json* sub(const json& j, const char* key) { return j.contains(key) ? &j.at(key) : nullptr; }

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  reject_unknown_keys(j, to_json(c), "");
  get_if(j, "engine", c.engine);
  get_if(j, "device", c.device);
  get_if(j, "seed", c.seed);
  get_if(j, "epochs", c.epochs);
  get_if(j, "fast", c.fast);
  get_if(j, "out_dir", c.out_dir);
  get_if(j, "dt_s", c.dt_s);
  get_if(j, "presentation_s", c.presentation_s);
  if (const json* s = sub(j, "signals")) {
    if (const json* a = sub(*s, "alpha")) {
      get_if(*a, "tau1_s", c.alpha.tau1_s);
      get_if(*a, "tau2_s", c.alpha.tau2_s);
      get_if(*a, "v0", c.alpha.v0);
    }
    if (const json* r = sub(*s, "read")) {
      get_if(*r, "amplitude_v", c.read.amplitude_v);
      get_if(*r, "period_s", c.read.period_s);
      get_if(*r, "duration_s", c.read.duration_s);
      get_if(*r, "global_phase", c.read.global_phase);
    }
    if (const json* p = sub(*s, "pre_pulse")) {
      get_if(*p, "amplitude_v", c.pre_pulse.amplitude_v);
      get_if(*p, "period_s", c.pre_pulse.period_s);
      get_if(*p, "tau_tail_s", c.pre_pulse.tau_tail_s);
    }
    if (const json* p = sub(*s, "post_pulse")) {
      get_if(*p, "amplitude_v", c.post_pulse.amplitude_v);
      get_if(*p, "period_s", c.post_pulse.period_s);
      get_if(*p, "tau_tail_s", c.post_pulse.tau_tail_s);
    }
    if (const json* h = sub(*s, "hpf")) {
      get_if(*h, "omega_3db_rad_s", c.hpf.omega_3db_rad_s);
      get_if(*h, "order", c.hpf.order);
    }
  }
  if (const json* n = sub(j, "neuron")) {
    auto read_lif = [](const json& jn, LifParams& p) {
      get_if(jn, "capacitance_f", p.capacitance_f);
      get_if(jn, "leak_conductance_s", p.leak_conductance_s);
      get_if(jn, "v_threshold", p.v_threshold);
      get_if(jn, "v_reset", p.v_reset);
      get_if(jn, "tau_refractory_s", p.tau_refractory_s);
    };
    if (const json* in = sub(*n, "input")) read_lif(*in, c.input_lif);
    if (const json* out = sub(*n, "output")) read_lif(*out, c.output_lif);
  }
  if (const json* s = sub(j, "stdp")) {
    get_if(*s, "a_plus", c.stdp.a_plus);
    get_if(*s, "a_minus", c.stdp.a_minus);
    get_if(*s, "tau_plus_s", c.stdp.tau_plus_s);
    get_if(*s, "tau_minus_s", c.stdp.tau_minus_s);
    get_if(*s, "p", c.stdp.p);
    get_if(*s, "g_max", c.stdp.g_max);
  }
  if (const json* d = sub(j, "device_params")) {
    if (const json* i = sub(*d, "ideal")) {
      get_if(*i, "c_state_f", c.ideal_rram.c_state_f);
      get_if(*i, "v_tp", c.ideal_rram.v_tp);
      get_if(*i, "v_tn", c.ideal_rram.v_tn);
      get_if(*i, "g_max", c.ideal_rram.g_max);
      get_if(*i, "pump_gain", c.ideal_rram.pump_gain);
    }
    if (const json* h = sub(*d, "hfo2")) {
      get_if(*h, "v_c_min", c.hfo2.v_c_min);
      get_if(*h, "v_c_max", c.hfo2.v_c_max);
      get_if(*h, "area_scale", c.hfo2.area_scale);
    }
    if (const json* q = sub(*d, "quadratic")) {
      get_if(*q, "k", c.quadratic.k);
      get_if(*q, "v_ref", c.quadratic.v_ref);
    }
    if (const json* p = sub(*d, "pump")) {
      get_if(*p, "law", c.pump_law);
      get_if(*p, "gain_set", c.pump_gain_set);
      get_if(*p, "gain_reset", c.pump_gain_reset);
      get_if(*p, "saturation_p", c.saturation_p);
    }
  }
  if (const json* e = sub(j, "engine_params")) {
    get_if(*e, "t_offset_s", c.t_offset_s);
    get_if(*e, "envelope_skip_periods", c.envelope_skip_periods);
    get_if(*e, "filter_enabled", c.filter_enabled);
    get_if(*e, "kappa", c.kappa);
    get_if(*e, "parallel_min_devices", c.parallel_min_devices);
    get_if(*e, "trace_decimation", c.trace_decimation);
  }
  if (const json* i = sub(j, "iris")) {
    get_if(*i, "fields_per_attribute", c.encoder.fields_per_attribute);
    get_if(*i, "sigma", c.encoder.sigma);
    get_if(*i, "i_max_a", c.encoder.i_max_a);
    get_if(*i, "teacher_excite_a", c.teacher_excite_a);
    get_if(*i, "teacher_inhibit_a", c.teacher_inhibit_a);
    get_if(*i, "train_fraction", c.train_fraction);
    get_if(*i, "init_weight_lo", c.init_weight_lo);
    get_if(*i, "init_weight_hi", c.init_weight_hi);
    get_if(*i, "curriculum", c.curriculum);
    get_if(*i, "reshuffle_each_epoch", c.reshuffle_each_epoch);
    get_if(*i, "data_path", c.data_path);
  }
  if (const json* v = sub(j, "validation")) {
    get_if(*v, "n_events", c.validation_events);
    get_if(*v, "isi_min_s", c.isi_min_s);
    get_if(*v, "isi_max_s", c.isi_max_s);
    get_if(*v, "stdp_delta_ts_ms", c.stdp_delta_ts_ms);
    get_if(*v, "quad_amplitudes_v", c.quad_amplitudes_v);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json merged = to_json(ExperimentConfig{});
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json file_json = json::parse(in);
    reject_unknown_keys(file_json, merged, "");
    merged.merge_patch(file_json);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: --set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    json* node = &merged;
    std::size_t start = 0;
    std::string leaf = key;
    std::string walked;
    while (true) {
      const auto dot = leaf.find('.');
      if (dot == std::string::npos) break;
      const std::string head = leaf.substr(0, dot);
      walked = walked.empty() ? head : walked + "." + head;
      if (!node->contains(head) || !(*node)[head].is_object()) {
        throw std::invalid_argument("config: unknown key '" + walked + "'");
      }
      node = &(*node)[head];
      leaf = leaf.substr(dot + 1);
      start = 0;
    }
    (void)start;
    if (!node->contains(leaf)) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      parsed = value;  // bare strings pass through
    }
    (*node)[leaf] = parsed;
  }
  ExperimentConfig cfg = config_from_json(merged);
  cfg.validate();
  return cfg;
}

void write_config_echo(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(std::filesystem::path(out_dir) / "config.json");
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace fdmsnn
