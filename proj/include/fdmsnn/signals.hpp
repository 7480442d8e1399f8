#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace fdmsnn {

// Two-exponential post-synaptic current kernel. tau1 < tau2 gives the usual
// fast-rise, slow-decay shape; the response is oriented positive.
struct AlphaParams {
  double tau1_s = 2e-3;
  double tau2_s = 10e-3;
  double v0 = 10e-12;
  void validate() const;
};

double alpha_response(double t_s, const AlphaParams& p);

// Location of the kernel maximum, ln(tau2/tau1) / (1/tau1 - 1/tau2).
double alpha_argmax_s(const AlphaParams& p);

// Spike-triggered write waveform: a full sine swing through +amplitude down
// to -amplitude on [0, 3T/4), then an exponential tail recovering from
// -amplitude. Continuous at the junction. The generating unit restarts from
// t = 0 on every trigger, so only elapsed time since the last trigger enters.
struct WritePulseParams {
  double amplitude_v = 0.5;
  double period_s = 2e-3;     // T of the sine section
  double tau_tail_s = 10e-3;  // tail decay constant
  void validate() const;
};

double write_pulse(double t_s, const WritePulseParams& p);

// Gated read sinusoid. Phase is referenced to absolute time (all generators
// share one phase), so simultaneous bursts on one column add coherently.
struct ReadBurstParams {
  double amplitude_v = 0.1;
  double period_s = 0.1e-3;
  double duration_s = 2.5e-3;
  bool global_phase = true;
  void validate() const;
};

double read_burst(double t_s, double t_spike_s, const ReadBurstParams& p);

// Cascade of identical, buffered first-order high-pass sections. The
// per-stage cutoff is placed so the cascade magnitude is -3 dB at
// omega_3db_rad_s.
struct HpfParams {
  double omega_3db_rad_s = 62831.853071795865;  // 2*pi*1e4
  int order = 8;
  double stage_cutoff_rad_s() const;
  void validate() const;
};

double hpf_magnitude(double omega_rad_s, const HpfParams& p);

class HpfCascade {
 public:
  HpfCascade() = default;
  explicit HpfCascade(const HpfParams& p);

  // Advance all stages by one sample. Bilinear update per stage.
  double step(double x, double dt_s);
  void reset();
  const HpfParams& params() const { return params_; }

 private:
  HpfParams params_{};
  std::vector<double> y_;
  std::vector<double> x_prev_;
};

// Uniformly sampled time series for any circuit node.
struct SignalTrace {
  double t0_s = 0.0;
  double dt_s = 0.0;
  std::vector<double> values;

  double time_at(std::size_t i) const { return t0_s + dt_s * static_cast<double>(i); }
  void write_csv(std::ostream& os) const;  // header: time_s,value
};

// Detected envelope: max |sample| over [t0, t1]. Throws on an empty window.
double envelope_extract(const SignalTrace& trace, double t0_s, double t1_s);

}  // namespace fdmsnn
