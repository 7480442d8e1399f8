#pragma once

#include <vector>

#include "fdmsnn/signals.hpp"

namespace fdmsnn {

// Voltage extrema across a device when a pre-side pulse starts at 0 and a
// post-side pulse starts at delta_t (equal trigger latency on both sides
// cancels, so only the spike-time difference matters). The device sees
// v(t) = w_pre(t) - w_post(t - delta_t).
//
// Extrema are tabulated on a dense delta_t grid once per parameter set;
// outside the table the tail-against-apex closed forms apply.
class PulsePairModel {
 public:
  PulsePairModel() = default;
  PulsePairModel(const WritePulseParams& pre, const WritePulseParams& post);

  double v_min(double delta_t_s) const;  // most negative excursion
  double v_max(double delta_t_s) const;  // most positive excursion

  const WritePulseParams& pre() const { return pre_; }
  const WritePulseParams& post() const { return post_; }

 private:
  void scan_entry(double delta_t_s, double& vmin, double& vmax) const;
  double closed_min(double delta_t_s) const;
  double closed_max(double delta_t_s) const;

  WritePulseParams pre_{};
  WritePulseParams post_{};
  double grid_dt_ = 0.0;
  double grid_lo_ = 0.0;
  std::vector<double> min_table_;
  std::vector<double> max_table_;
};

}  // namespace fdmsnn
