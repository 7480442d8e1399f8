#include "fdmsnn/signals.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fdmsnn {

namespace {
constexpr double kPi = std::numbers::pi;
}

void AlphaParams::validate() const {
  if (!(tau1_s > 0.0) || !(tau2_s > 0.0)) throw std::invalid_argument("alpha: time constants must be positive");
  if (tau1_s == tau2_s) throw std::invalid_argument("alpha: tau1 and tau2 must differ");
}

double alpha_response(double t_s, const AlphaParams& p) {
  if (t_s < 0.0) return 0.0;
  return p.v0 * std::fabs(std::exp(-t_s / p.tau1_s) - std::exp(-t_s / p.tau2_s));
}

double alpha_argmax_s(const AlphaParams& p) {
  return std::log(p.tau2_s / p.tau1_s) / (1.0 / p.tau1_s - 1.0 / p.tau2_s);
}

void WritePulseParams::validate() const {
  if (!(amplitude_v > 0.0)) throw std::invalid_argument("write_pulse: amplitude must be positive");
  if (!(period_s > 0.0)) throw std::invalid_argument("write_pulse: period must be positive");
  if (!(tau_tail_s > 0.0)) throw std::invalid_argument("write_pulse: tail constant must be positive");
}

double write_pulse(double t_s, const WritePulseParams& p) {
  if (t_s < 0.0) return 0.0;
  const double junction = 0.75 * p.period_s;  // sine reaches -amplitude here
  if (t_s < junction) return p.amplitude_v * std::sin(2.0 * kPi * t_s / p.period_s);
  return -p.amplitude_v * std::exp(-(t_s - junction) / p.tau_tail_s);
}

void ReadBurstParams::validate() const {
  if (!(amplitude_v > 0.0)) throw std::invalid_argument("read_burst: amplitude must be positive");
  if (!(period_s > 0.0)) throw std::invalid_argument("read_burst: period must be positive");
  if (duration_s < period_s) throw std::invalid_argument("read_burst: duration must cover at least one period");
}

double read_burst(double t_s, double t_spike_s, const ReadBurstParams& p) {
  if (t_s < t_spike_s || t_s >= t_spike_s + p.duration_s) return 0.0;
  const double phase_t = p.global_phase ? t_s : (t_s - t_spike_s);
  return p.amplitude_v * std::sin(2.0 * kPi * phase_t / p.period_s);
}

void HpfParams::validate() const {
  if (order < 1) throw std::invalid_argument("hpf: order must be >= 1");
  if (!(omega_3db_rad_s > 0.0)) throw std::invalid_argument("hpf: cutoff must be positive");
}

double HpfParams::stage_cutoff_rad_s() const {
  // |H1(w)|^order = 1/sqrt(2) at the overall cutoff.
  return omega_3db_rad_s * std::sqrt(std::pow(2.0, 1.0 / order) - 1.0);
}

double hpf_magnitude(double omega_rad_s, const HpfParams& p) {
  if (omega_rad_s < 0.0) throw std::invalid_argument("hpf_magnitude: omega must be >= 0");
  if (omega_rad_s == 0.0) return 0.0;
  const double ws = p.stage_cutoff_rad_s();
  const double one = omega_rad_s / std::sqrt(omega_rad_s * omega_rad_s + ws * ws);
  return std::pow(one, p.order);
}

HpfCascade::HpfCascade(const HpfParams& p) : params_(p) {
  params_.validate();
  y_.assign(static_cast<std::size_t>(params_.order), 0.0);
  x_prev_.assign(static_cast<std::size_t>(params_.order), 0.0);
}

double HpfCascade::step(double x, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("hpf_step: dt must be positive");
  const double a = params_.stage_cutoff_rad_s();
  // Bilinear transform of H(s) = s / (s + a), stage by stage.
  const double den = 2.0 + a * dt_s;
  const double c_in = 2.0 / den;
  const double c_fb = (2.0 - a * dt_s) / den;
  double v = x;
  for (std::size_t k = 0; k < y_.size(); ++k) {
    const double out = c_in * (v - x_prev_[k]) + c_fb * y_[k];
    x_prev_[k] = v;
    y_[k] = out;
    v = out;
  }
  return v;
}

void HpfCascade::reset() {
  std::fill(y_.begin(), y_.end(), 0.0);
  std::fill(x_prev_.begin(), x_prev_.end(), 0.0);
}

void SignalTrace::write_csv(std::ostream& os) const {
  os << "time_s,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << time_at(i) << ',' << values[i] << '\n';
  }
}

double envelope_extract(const SignalTrace& trace, double t0_s, double t1_s) {
  if (trace.values.empty() || !(trace.dt_s > 0.0)) throw std::invalid_argument("envelope_extract: empty trace");
  const double last = trace.time_at(trace.values.size() - 1);
  if (t0_s > t1_s || t1_s < trace.t0_s || t0_s > last) throw std::invalid_argument("envelope_extract: empty window");
  std::size_t i0 = 0;
  if (t0_s > trace.t0_s) i0 = static_cast<std::size_t>(std::ceil((t0_s - trace.t0_s) / trace.dt_s - 1e-12));
  std::size_t i1 = trace.values.size() - 1;
  if (t1_s < last) i1 = static_cast<std::size_t>(std::floor((t1_s - trace.t0_s) / trace.dt_s + 1e-12));
  if (i0 > i1) throw std::invalid_argument("envelope_extract: empty window");
  double peak = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) peak = std::max(peak, std::fabs(trace.values[i]));
  return peak;
}

}  // namespace fdmsnn
