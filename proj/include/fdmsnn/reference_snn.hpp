#pragma once

#include <span>
#include <vector>

#include "fdmsnn/device.hpp"
#include "fdmsnn/events.hpp"
#include "fdmsnn/neuron.hpp"
#include "fdmsnn/signals.hpp"
#include "fdmsnn/stdp.hpp"
#include "fdmsnn/write_overlap.hpp"

namespace fdmsnn {

enum class ReadModel { ideal, eq7_quadratic };

// How weights evolve: the pair rule applied directly to scalar weights, or a
// behavioral device per synapse pumped by the analytic pulse-overlap extrema
// against its (possibly state-dependent) thresholds.
enum class PlasticityModel { pair_rule, device_backed };

struct RefConfig {
  int rows = 16;
  int cols = 3;
  double dt_s = 1e-5;

  LifParams input_lif{};
  LifParams output_lif{300e-12, 30e-9, 90e-3, 0.0, 0.0};
  AlphaParams alpha{};
  StdpParams stdp{};

  ReadModel read_model = ReadModel::ideal;
  double eq7_amplitude_v = 0.3;
  QuadraticParams quadratic{};

  PlasticityModel plasticity = PlasticityModel::pair_rule;
  DeviceParams device{};

  // Virtual waveforms; they set the eq7 bias samples and the device-backed
  // pair overdrives. Equal trigger latency on both layers.
  WritePulseParams pre_pulse{0.5, 2e-3, 10e-3};
  WritePulseParams post_pulse{0.5, 2e-3, 20e-3};
  double t_offset_s = 2.6e-3;

  // Apply a pair only when the superposed pulses actually cross the write
  // thresholds, mirroring the hardware's near-coincidence dead zone. A
  // depression event also commits only if no newer post spike restarts the
  // column pulse before the crossing instant.
  bool pulse_overlap_gate = true;

  void validate() const;
};

// Two-layer feed-forward spiking network: leaky integrate-and-fire neurons,
// double-exponential synaptic currents, pair-based plasticity. Pairing is
// last-spike only; potentiation applies at post spikes, depression at pre
// spikes.
class RefNetwork {
 public:
  explicit RefNetwork(const RefConfig& cfg);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double time_s() const { return time_; }
  const RefConfig& config() const { return cfg_; }

  void set_plastic(bool on) { plastic_ = on; }
  bool plastic() const { return plastic_; }

  void set_weight_positions(std::span<const double> pos01);  // row-major
  std::vector<double> weights() const;                       // row-major conductances

  void step(std::span<const double> input_currents, std::span<const double> output_bias);
  void reset_presentation();

  // Synaptic drive into output col as of the last completed step.
  double synaptic_current(int col) const;

  const std::vector<SpikeEvent>& events() const { return events_; }
  void clear_events() { events_.clear(); }

  // Effective read factor for column j at time t under the eq7 model;
  // returns 1 in ideal mode.
  double eq7_factor(int col, double t_s) const;

  void set_record_bias(bool on) { record_bias_ = on; }
  const std::vector<double>& bias_samples() const { return bias_samples_; }
  void clear_bias_samples() { bias_samples_.clear(); }

 private:
  double virtual_bias(int row, int col, double t_s) const;
  double g_read_lookup(double v_bias) const;
  void apply_potentiation(int col, double t_now);
  void apply_depression(int row, double t_now);
  void commit_depression(int row, int col, double delta_t);
  void flush_pending_depression(double t_now);

  RefConfig cfg_;
  int rows_ = 0;
  int cols_ = 0;

  std::vector<double> weights_;          // pair_rule mode, row-major
  std::vector<DeviceState> devices_;     // device_backed mode, row-major
  std::vector<NeuronState> input_neurons_, output_neurons_;
  LifCoeffs in_coeffs_{}, out_coeffs_{};
  std::vector<double> alpha_slow_, alpha_fast_;
  double alpha_decay_slow_ = 0.0, alpha_decay_fast_ = 0.0;

  std::vector<double> last_pre_, last_post_;        // spike times, -inf when none
  std::vector<double> row_pulse_start_, col_pulse_start_;
  PulsePairModel pairs_;

  struct PendingDepression {
    int row;
    int col;
    double post_t;
    double commit_t;
    double delta_t;
  };
  std::vector<PendingDepression> pending_ltd_;

  std::vector<double> g_read_table_;  // eq7 lookup over v_bias
  double g_read_lo_ = 0.0, g_read_step_ = 0.0, g_read_zero_ = 1.0;

  double time_ = 0.0;
  bool plastic_ = true;
  bool record_bias_ = false;
  std::vector<double> bias_samples_;
  std::vector<SpikeEvent> events_;
};

}  // namespace fdmsnn
