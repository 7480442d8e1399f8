#include "fdmsnn/write_overlap.hpp"

#include <algorithm>
#include <cmath>

namespace fdmsnn {

namespace {
constexpr double kGridSpan = 0.12;   // table covers |delta_t| <= 120 ms
constexpr double kGridStep = 5e-5;   // linear interp between entries
constexpr double kScanStep = 1e-5;   // waveform scan resolution per entry
}  // namespace

PulsePairModel::PulsePairModel(const WritePulseParams& pre, const WritePulseParams& post)
    : pre_(pre), post_(post) {
  pre_.validate();
  post_.validate();
  grid_dt_ = kGridStep;
  grid_lo_ = -kGridSpan;
  const std::size_t n = static_cast<std::size_t>(std::round(2.0 * kGridSpan / kGridStep)) + 1;
  min_table_.resize(n);
  max_table_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = grid_lo_ + grid_dt_ * static_cast<double>(i);
    scan_entry(dt, min_table_[i], max_table_[i]);
  }
}

void PulsePairModel::scan_entry(double delta_t_s, double& vmin, double& vmax) const {
  // Threshold-relevant extrema sit near one of the two humps; the pure
  // tail-against-tail stretch between them stays below one pulse amplitude.
  vmin = 0.0;
  vmax = 0.0;
  auto scan = [&](double lo, double hi) {
    for (double t = lo; t <= hi; t += kScanStep) {
      const double v = write_pulse(t, pre_) - write_pulse(t - delta_t_s, post_);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  };
  const double w = 8e-3;
  if (std::fabs(delta_t_s) < w) {
    scan(std::min(0.0, delta_t_s) - 1e-3, std::max(0.0, delta_t_s) + w);
  } else {
    scan(-1e-3, w);
    scan(delta_t_s - 1e-3, delta_t_s + w);
  }
}

double PulsePairModel::closed_min(double delta_t_s) const {
  if (delta_t_s > 0.0) {
    // Pre tail under the post hump apex.
    const double apex = delta_t_s + 0.25 * post_.period_s;
    const double tail_start = 0.75 * pre_.period_s;
    const double e = apex > tail_start ? std::exp(-(apex - tail_start) / pre_.tau_tail_s) : 1.0;
    return -post_.amplitude_v - pre_.amplitude_v * e;
  }
  return -pre_.amplitude_v;  // far-separated pulses never cross below one amplitude
}

double PulsePairModel::closed_max(double delta_t_s) const {
  if (delta_t_s < 0.0) {
    // Post tail under the pre hump apex.
    const double apex = 0.25 * pre_.period_s;
    const double tail_start = delta_t_s + 0.75 * post_.period_s;
    const double e = apex > tail_start ? std::exp(-(apex - tail_start) / post_.tau_tail_s) : 1.0;
    return pre_.amplitude_v + post_.amplitude_v * e;
  }
  return pre_.amplitude_v;
}

double PulsePairModel::v_min(double delta_t_s) const {
  if (min_table_.empty()) return 0.0;
  if (delta_t_s <= grid_lo_ || delta_t_s >= -grid_lo_) return closed_min(delta_t_s);
  const double pos = (delta_t_s - grid_lo_) / grid_dt_;
  const std::size_t i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return min_table_[i] * (1.0 - f) + min_table_[std::min(i + 1, min_table_.size() - 1)] * f;
}

double PulsePairModel::v_max(double delta_t_s) const {
  if (max_table_.empty()) return 0.0;
  if (delta_t_s <= grid_lo_ || delta_t_s >= -grid_lo_) return closed_max(delta_t_s);
  const double pos = (delta_t_s - grid_lo_) / grid_dt_;
  const std::size_t i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return max_table_[i] * (1.0 - f) + max_table_[std::min(i + 1, max_table_.size() - 1)] * f;
}

}  // namespace fdmsnn
