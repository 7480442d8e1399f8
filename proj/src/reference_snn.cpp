#include "fdmsnn/reference_snn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdmsnn {

namespace {
constexpr double kNever = -1e30;
constexpr double kPairHorizon = 0.3;  // pairs older than this contribute nothing
}

void RefConfig::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("ref: grid must be at least 1x1");
  if (!(dt_s > 0.0) || dt_s > 1e-4 + 1e-15) throw std::invalid_argument("ref: dt must be positive and <= 0.1 ms");
  input_lif.validate();
  output_lif.validate();
  alpha.validate();
  stdp.validate();
  quadratic.validate();
  device.validate();
  pre_pulse.validate();
  post_pulse.validate();
}

RefNetwork::RefNetwork(const RefConfig& cfg) : cfg_(cfg), pairs_(cfg.pre_pulse, cfg.post_pulse) {
  cfg_.validate();
  rows_ = cfg_.rows;
  cols_ = cfg_.cols;
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  if (cfg_.plasticity == PlasticityModel::device_backed) {
    devices_.assign(n, make_device_state(cfg_.device, cfg_.device.v_c_mid()));
  } else {
    weights_.assign(n, 0.5 * cfg_.stdp.g_max);
  }
  input_neurons_.assign(rows_, NeuronState{});
  output_neurons_.assign(cols_, NeuronState{});
  in_coeffs_ = LifCoeffs::make(cfg_.input_lif, cfg_.dt_s);
  out_coeffs_ = LifCoeffs::make(cfg_.output_lif, cfg_.dt_s);
  alpha_slow_.assign(cols_, 0.0);
  alpha_fast_.assign(cols_, 0.0);
  alpha_decay_slow_ = std::exp(-cfg_.dt_s / cfg_.alpha.tau2_s);
  alpha_decay_fast_ = std::exp(-cfg_.dt_s / cfg_.alpha.tau1_s);
  last_pre_.assign(rows_, kNever);
  last_post_.assign(cols_, kNever);
  row_pulse_start_.assign(rows_, kNever);
  col_pulse_start_.assign(cols_, kNever);

  if (cfg_.read_model == ReadModel::eq7_quadratic) {
    // Dense lookup of the effective read conductance over the bias range the
    // write tails can produce, normalized at zero bias (the read path is
    // calibrated there, like the circuit's kappa).
    const double amp = cfg_.eq7_amplitude_v;
    if (!(amp > 0.0)) throw std::invalid_argument("ref: eq7 amplitude must be positive");
    g_read_lo_ = -1.5;
    g_read_step_ = 1e-3;
    const int count = static_cast<int>(std::round(3.0 / g_read_step_)) + 1;
    g_read_table_.resize(count);
    for (int i = 0; i < count; ++i) {
      g_read_table_[i] = g_read(cfg_.quadratic, g_read_lo_ + i * g_read_step_, amp);
    }
    g_read_zero_ = g_read(cfg_.quadratic, 0.0, amp);
  }
}

void RefNetwork::set_weight_positions(std::span<const double> pos01) {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  if (pos01.size() != n) throw std::invalid_argument("set_weight_positions: size mismatch");
  if (cfg_.plasticity == PlasticityModel::device_backed) {
    const double lo = cfg_.device.v_c_lower();
    const double hi = cfg_.device.v_c_upper();
    for (std::size_t k = 0; k < n; ++k) devices_[k] = make_device_state(cfg_.device, lo + pos01[k] * (hi - lo));
  } else {
    for (std::size_t k = 0; k < n; ++k) weights_[k] = std::clamp(pos01[k], 0.0, 1.0) * cfg_.stdp.g_max;
  }
}

std::vector<double> RefNetwork::weights() const {
  if (cfg_.plasticity == PlasticityModel::device_backed) {
    std::vector<double> g(devices_.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = conductance(devices_[k], cfg_.device);
    return g;
  }
  return weights_;
}

double RefNetwork::virtual_bias(int row, int col, double t_s) const {
  const double pre = row_pulse_start_[row] > kNever / 2 ? write_pulse(t_s - row_pulse_start_[row], cfg_.pre_pulse) : 0.0;
  const double post = col_pulse_start_[col] > kNever / 2 ? write_pulse(t_s - col_pulse_start_[col], cfg_.post_pulse) : 0.0;
  return pre - post;
}

double RefNetwork::g_read_lookup(double v_bias) const {
  const double hi = g_read_lo_ + g_read_step_ * (static_cast<double>(g_read_table_.size()) - 1.0);
  const double v = std::clamp(v_bias, g_read_lo_, hi);
  const double pos = (v - g_read_lo_) / g_read_step_;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), g_read_table_.size() - 2);
  const double f = pos - static_cast<double>(i);
  return g_read_table_[i] * (1.0 - f) + g_read_table_[i + 1] * f;
}

double RefNetwork::eq7_factor(int col, double t_s) const {
  if (cfg_.read_model != ReadModel::eq7_quadratic) return 1.0;
  // Bias seen by the device of the most recently reading row, per the
  // virtual generator waveforms.
  int row = 0;
  double best = kNever;
  for (int i = 0; i < rows_; ++i) {
    if (last_pre_[i] > best) {
      best = last_pre_[i];
      row = i;
    }
  }
  return g_read_lookup(virtual_bias(row, col, t_s));
}

void RefNetwork::apply_potentiation(int col, double t_now) {
  for (int i = 0; i < rows_; ++i) {
    if (last_pre_[i] < t_now - kPairHorizon) continue;
    const double delta_t = t_now - last_pre_[i];
    const std::size_t k = static_cast<std::size_t>(i) * cols_ + col;
    if (cfg_.plasticity == PlasticityModel::device_backed) {
      DeviceState& d = devices_[k];
      const auto [v_tp, v_tn] = thresholds(d, cfg_.device);
      (void)v_tp;
      const double ovd = v_tn - pairs_.v_min(delta_t);
      if (ovd > 0.0) apply_peak_overdrive(d, ovd, true, cfg_.device);
    } else {
      if (cfg_.pulse_overlap_gate && pairs_.v_min(delta_t) >= cfg_.device.ideal.v_tn) continue;
      weights_[k] += apply_stdp(weights_[k], delta_t, cfg_.stdp);
    }
  }
}

void RefNetwork::apply_depression(int row, double t_now) {
  // The crossing that writes depression happens at the pre pulse apex. Both
  // generators carry the same trigger latency, so a newer post spike erases
  // the pair exactly when it lands within the apex offset T/4.
  const double commit_at = t_now + 0.25 * cfg_.pre_pulse.period_s;
  for (int j = 0; j < cols_; ++j) {
    if (last_post_[j] < t_now - kPairHorizon) continue;
    const double delta_t = last_post_[j] - t_now;  // <= 0
    (void)commit_at;
    commit_depression(row, j, delta_t);
  }
}

void RefNetwork::commit_depression(int row, int col, double delta_t) {
  const std::size_t k = static_cast<std::size_t>(row) * cols_ + col;
  if (cfg_.plasticity == PlasticityModel::device_backed) {
    DeviceState& d = devices_[k];
    const auto [v_tp, v_tn] = thresholds(d, cfg_.device);
    (void)v_tn;
    const double ovd = pairs_.v_max(delta_t) - v_tp;
    if (ovd > 0.0) apply_peak_overdrive(d, ovd, false, cfg_.device);
  } else {
    if (cfg_.pulse_overlap_gate && pairs_.v_max(delta_t) <= cfg_.device.ideal.v_tp) return;
    weights_[k] += apply_stdp(weights_[k], delta_t, cfg_.stdp);
  }
}

void RefNetwork::flush_pending_depression(double t_now) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < pending_ltd_.size(); ++i) {
    PendingDepression& p = pending_ltd_[i];
    if (last_post_[p.col] > p.post_t) continue;  // erased by a newer post pulse
    if (t_now >= p.commit_t) {
      commit_depression(p.row, p.col, p.delta_t);
      continue;
    }
    pending_ltd_[out++] = p;
  }
  pending_ltd_.resize(out);
}

void RefNetwork::step(std::span<const double> input_currents, std::span<const double> output_bias) {
  if (!input_currents.empty() && input_currents.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("ref step: input current vector size mismatch");
  }
  if (!output_bias.empty() && output_bias.size() != static_cast<std::size_t>(cols_)) {
    throw std::invalid_argument("ref step: output bias vector size mismatch");
  }
  const double t = time_;
  flush_pending_depression(t);

  // Input layer. A pre spike reads its row into every column's synaptic
  // current generator and restarts the row's virtual write pulse; depression
  // pairs with each column's last post spike.
  for (int i = 0; i < rows_; ++i) {
    const double drive = input_currents.empty() ? 0.0 : input_currents[i];
    if (lif_step_coeffs(input_neurons_[i], drive, cfg_.dt_s, in_coeffs_, t)) {
      events_.push_back({i, t});
      const bool eq7 = cfg_.read_model == ReadModel::eq7_quadratic;
      for (int j = 0; j < cols_; ++j) {
        double w = cfg_.plasticity == PlasticityModel::device_backed
                       ? conductance(devices_[static_cast<std::size_t>(i) * cols_ + j], cfg_.device)
                       : weights_[static_cast<std::size_t>(i) * cols_ + j];
        if (eq7) {
          const double vb = virtual_bias(i, j, t);
          if (record_bias_) bias_samples_.push_back(vb);
          w *= g_read_lookup(vb) / g_read_zero_;
        }
        alpha_slow_[j] += w;
        alpha_fast_[j] += w;
      }
      if (plastic_) apply_depression(i, t);
      last_pre_[i] = t;
      row_pulse_start_[i] = t + cfg_.t_offset_s;
    }
  }

  // Output layer on the summed synaptic currents.
  for (int j = 0; j < cols_; ++j) {
    alpha_slow_[j] *= alpha_decay_slow_;
    alpha_fast_[j] *= alpha_decay_fast_;
    const double i_alpha = cfg_.alpha.v0 * (alpha_slow_[j] - alpha_fast_[j]);
    const double bias = output_bias.empty() ? 0.0 : output_bias[j];
    if (lif_step_coeffs(output_neurons_[j], i_alpha + bias, cfg_.dt_s, out_coeffs_, t)) {
      events_.push_back({rows_ + j, t});
      if (plastic_) apply_potentiation(j, t);
      last_post_[j] = t;
      col_pulse_start_[j] = t + cfg_.t_offset_s;
    }
  }

  time_ += cfg_.dt_s;
}

double RefNetwork::synaptic_current(int col) const {
  return cfg_.alpha.v0 * (alpha_slow_[col] - alpha_fast_[col]);
}

void RefNetwork::reset_presentation() {
  std::fill(input_neurons_.begin(), input_neurons_.end(), NeuronState{});
  std::fill(output_neurons_.begin(), output_neurons_.end(), NeuronState{});
  std::fill(alpha_slow_.begin(), alpha_slow_.end(), 0.0);
  std::fill(alpha_fast_.begin(), alpha_fast_.end(), 0.0);
  std::fill(last_pre_.begin(), last_pre_.end(), kNever);
  std::fill(last_post_.begin(), last_post_.end(), kNever);
  std::fill(row_pulse_start_.begin(), row_pulse_start_.end(), kNever);
  std::fill(col_pulse_start_.begin(), col_pulse_start_.end(), kNever);
  pending_ltd_.clear();
  for (auto& d : devices_) {
    d.episode_sign = 0;
    d.episode_peak = 0.0;
    d.below_time_s = 0.0;
  }
  time_ = 0.0;
  events_.clear();
}

}  // namespace fdmsnn
