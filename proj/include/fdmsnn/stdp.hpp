#pragma once

namespace fdmsnn {

// Pair-based plasticity rule. delta_t = t_post - t_pre; the positive branch
// potentiates with window tau_plus, the negative branch depresses with
// tau_minus, both attenuated by a saturation factor of exponent p.
struct StdpParams {
  double a_plus = 9.0;
  double a_minus = -15.0;
  double tau_plus_s = 10e-3;
  double tau_minus_s = 20e-3;
  double p = 1.7;
  double g_max = 700.0;
  void validate() const;
};

// Weight change for one pair event, clamped so g + delta stays in [0, g_max].
double apply_stdp(double g, double delta_t_s, const StdpParams& s);

}  // namespace fdmsnn
