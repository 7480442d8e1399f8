#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdmsnn/device.hpp"
#include "fdmsnn/events.hpp"
#include "fdmsnn/kernels.hpp"
#include "fdmsnn/neuron.hpp"
#include "fdmsnn/signals.hpp"

namespace fdmsnn {

struct EngineConfig {
  int rows = 16;
  int cols = 3;
  double dt_s = 1e-5;

  ReadBurstParams read{};
  WritePulseParams pre_pulse{0.5, 2e-3, 10e-3};
  WritePulseParams post_pulse{0.5, 2e-3, 20e-3};
  double t_offset_s = 2.6e-3;  // spike -> write-pulse start delay, both layers

  HpfParams hpf{};
  bool filter_enabled = true;
  int envelope_skip_periods = 6;  // settling periods muted after every read-gating edge
  // A retriggered write generator slews from its present output into the new
  // pulse with this time constant instead of jumping, like the charging
  // circuit it stands for. Keeps restart edges out of the read band.
  double restart_tau_s = 2e-4;
  // Merged read windows are chopped at this length so a long union of
  // overlapping bursts still feeds the synaptic chain at a bounded cadence.
  double envelope_max_window_s = 2.5e-3;

  DeviceParams device{};
  LifParams input_lif{};                                    // tau_ref 5 ms
  LifParams output_lif{300e-12, 30e-9, 90e-3, 0.0, 0.0};    // tau_ref 0
  AlphaParams alpha{};

  double kappa = 0.0;  // envelope -> conductance estimate; calibrate_kappa fills it
  int parallel_min_devices = 4096;

  void validate() const;
};

// Fixed-step mixed-signal loop wiring neurons, waveform generators, the
// device grid, the sense/filter/envelope read path and the write feedback.
//
// Per tick: input neurons fire -> the row's read burst starts immediately and
// its write pulse t_offset later; row voltage = burst + pulse, column voltage
// = that column's post pulse; every device integrates its differential bias;
// column currents are filtered and peak-tracked per read window; at window
// close an impulse of kappa * envelope enters the column's alpha generator,
// which drives the output neuron; output spikes trigger the column write
// pulse at +t_offset.
class CrossbarEngine {
 public:
  explicit CrossbarEngine(const EngineConfig& cfg);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double time_s() const { return time_; }
  double dt_s() const { return cfg_.dt_s; }
  const EngineConfig& config() const { return cfg_; }

  void set_writes_enabled(bool on) { writes_enabled_ = on; }
  bool writes_enabled() const { return writes_enabled_; }
  void set_kappa(double k) { cfg_.kappa = k; }

  // Device state positions in [0, 1] mapped onto the model's V_C range,
  // row-major (i * cols + j).
  void set_weight_positions(std::span<const double> pos01);
  std::vector<double> weights() const;  // conductances, row-major

  void force_pre_spike(int row);
  void force_post_spike(int col);

  // One tick. input_currents drives the input layer (empty -> zeros);
  // output_bias adds to the output layer input (empty -> zeros).
  void step(std::span<const double> input_currents, std::span<const double> output_bias);

  // Fresh presentation: neurons, generators, filters, envelopes, alpha state
  // and the clock restart; device states persist. Clears logs.
  void reset_presentation();

  const std::vector<SpikeEvent>& events() const { return events_; }
  void clear_events() { events_.clear(); }

  struct Impulse {
    int col = 0;
    double t_s = 0.0;
    double value = 0.0;  // kappa * envelope
  };
  const std::vector<Impulse>& impulses() const { return impulses_; }

  void enable_tracing(int decimation);
  const SignalTrace& trace_row_voltage() const { return trace_row_v_; }
  const SignalTrace& trace_column_current() const { return trace_col_i_; }
  const SignalTrace& trace_filtered() const { return trace_filtered_; }

 private:
  // Envelope per column: a parabolic-refined peak over the current read
  // period becomes the held rectifier output, integrated over the window so
  // the emitted drive matches the summed per-burst conductances no matter
  // how bursts overlap.
  struct EnvelopeTracker {
    double best = 0.0;       // peak within the running period
    double hold = 0.0;       // detector output, updated each period
    double integral = 0.0;   // integral of hold over the window
    double pending_s = 0.0;  // window time elapsed before the first held value
    double prev1 = 0.0;
    double prev2 = 0.0;
    int fed = 0;
    void reset() { best = hold = integral = pending_s = prev1 = prev2 = 0.0; fed = 0; }
    void feed(double mag);
    void accumulate(double dt_s) {
      if (hold > 0.0) {
        integral += hold * dt_s;
      } else {
        pending_s += dt_s;  // backfilled once the detector produces a level
      }
    }
    void latch_hold(double value) {
      hold = value;
      if (pending_s > 0.0 && hold > 0.0) {
        integral += hold * pending_s;
        pending_s = 0.0;
      }
    }
  };

  void close_read_window();
  void advance_envelope_period();

  double window_open_t_ = 0.0;
  double period_anchor_ = 0.0;

  EngineConfig cfg_;
  int rows_ = 0;
  int cols_ = 0;

  std::vector<DeviceState> devices_;  // column-major, j * rows + i
  // One write-pulse generator: the playing pulse plus at most one pending
  // restart. Each pulse carries the previous chain's value at its start and
  // bleeds it off with restart_tau_s, so retriggering never steps the output.
  struct PulseGen {
    double play_start = -1e30;
    double play_handoff = 0.0;
    double next_start = -1e30;
    double next_handoff = 0.0;
  };
  double pulse_value(const PulseGen& g, double t, const WritePulseParams& p) const;
  void retrigger(PulseGen& g, double t_trigger, const WritePulseParams& p);

  std::vector<double> row_v_, col_v_, col_current_, filtered_, alpha_slow_, alpha_fast_;
  std::vector<double> read_start_;
  std::vector<PulseGen> row_pulse_, col_pulse_;
  std::vector<HpfCascade> filters_;
  std::vector<EnvelopeTracker> trackers_;
  std::vector<NeuronState> input_neurons_, output_neurons_;
  std::vector<std::uint8_t> force_pre_, force_post_;
  LifCoeffs in_coeffs_{}, out_coeffs_{};
  double alpha_decay_slow_ = 0.0, alpha_decay_fast_ = 0.0;

  bool window_active_ = false;
  double window_mute_until_ = 0.0;
  double last_feed_time_ = -1.0;
  int reading_rows_ = 0;

  double time_ = 0.0;
  bool writes_enabled_ = true;
  std::vector<SpikeEvent> events_;
  std::vector<Impulse> impulses_;

  int trace_decimation_ = 0;
  long tick_ = 0;
  SignalTrace trace_row_v_, trace_col_i_, trace_filtered_;
};

// Single read burst against a mid-range reference device with writes
// disabled; returns kappa such that the emitted impulse equals the reference
// conductance. Throws if the measured envelope is numerically zero.
double calibrate_kappa(const EngineConfig& cfg);

// Derive peak-law pump gains from the plasticity targets: a pair at
// separation delta_t must change G by a_plus*exp(-dt/tau+) (and the mirrored
// depression branch), given the pulse-overlap overdrive geometry.
void derive_pump_gains(DeviceParams& dev, double a_plus, double tau_plus_s, double a_minus,
                       double tau_minus_s, const WritePulseParams& pre, const WritePulseParams& post);

struct StdpSweepRow {
  double delta_t_s = 0.0;
  double dg_circuit = 0.0;
  double dg_eq4 = 0.0;
};

// Forced pre/post pair per delta_t from a mid-range state; integrates until
// both pulses decay and records the conductance change next to the pair-rule
// prediction (saturation exponent comes from the config).
std::vector<StdpSweepRow> run_stdp_sweep(std::span<const double> delta_ts_s, const EngineConfig& cfg,
                                         double a_plus, double tau_plus_s, double a_minus,
                                         double tau_minus_s, double p_exponent);

struct ReadValidationEvent {
  double t_s = 0.0;
  double g_actual = 0.0;
  double g_estimate = 0.0;
  double rel_error = 0.0;
};

// Drives a 1x1 array with independent random spike trains on both sides
// (uniform inter-spike intervals in [isi_min, isi_max]) and records the
// relative read error at every read instant.
std::vector<ReadValidationEvent> run_read_validation(int n_events, std::uint64_t seed,
                                                     const EngineConfig& cfg, double isi_min_s,
                                                     double isi_max_s);

}  // namespace fdmsnn
