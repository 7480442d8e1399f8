#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdmsnn/crossbar.hpp"
#include "fdmsnn/iris.hpp"
#include "fdmsnn/reference_snn.hpp"

#include "json.hpp"

namespace fdmsnn {

// The full parameter set of a run. Serializable so every run can be replayed
// from its echoed configuration.
struct ExperimentConfig {
  std::string engine = "reference";  // reference | circuit
  std::string device = "ideal";      // ideal | hfo2 | quadratic
  std::uint64_t seed = 1;
  int epochs = 20;
  bool fast = false;
  std::string out_dir = "out";

  double dt_s = 1e-5;
  double presentation_s = 0.1;

  AlphaParams alpha{};
  ReadBurstParams read{};
  WritePulseParams pre_pulse{0.5, 2e-3, 10e-3};
  WritePulseParams post_pulse{0.5, 2e-3, 20e-3};
  HpfParams hpf{};

  LifParams input_lif{};
  LifParams output_lif{300e-12, 30e-9, 90e-3, 0.0, 2.0e-3};
  StdpParams stdp{};

  IdealRramParams ideal_rram{};
  // Engine-side hfo2 defaults differ from the bare-device ones: the map is
  // area-scaled up and the usable state range trimmed so the conductance span
  // drives the output layer the input currents were sized for.
  Hfo2Params hfo2{-1.2, -0.6, 7.0};
  QuadraticParams quadratic{};
  std::string pump_law = "peak";  // rate | peak
  double pump_gain_set = 0.0;     // <= 0 selects the derived value
  double pump_gain_reset = 0.0;
  double saturation_p = 1.7;

  double t_offset_s = 2.6e-3;
  int envelope_skip_periods = 6;
  bool filter_enabled = true;
  double kappa = 0.0;  // 0 -> calibrate at run start
  int parallel_min_devices = 4096;
  int trace_decimation = 0;

  EncoderParams encoder{};
  double teacher_excite_a = 8.1e-9;
  double teacher_inhibit_a = -10.8e-9;
  double train_fraction = 0.3;
  double init_weight_lo = 0.10;
  double init_weight_hi = 0.30;
  bool curriculum = true;
  bool reshuffle_each_epoch = false;
  std::string data_path;  // empty -> bundled dataset

  int validation_events = 200;
  double isi_min_s = 5e-3;
  double isi_max_s = 50e-3;
  std::vector<double> stdp_delta_ts_ms{2, 5, 10, 20, 40, -2, -5, -10, -20, -40};
  std::vector<double> quad_amplitudes_v{0.01, 0.1, 0.3};

  void validate() const;

  // Materialize per-engine structures. Auto quantities (pump gains, kappa)
  // are resolved here.
  DeviceParams device_params() const;
  EngineConfig engine_config() const;   // kappa still 0 when auto
  RefConfig ref_config() const;
  TrainOptions train_options() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Load defaults, overlay a JSON file (optional) and key=value overrides
// (dotted paths). Unknown keys are rejected with a diagnostic naming them.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

void write_config_echo(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace fdmsnn
