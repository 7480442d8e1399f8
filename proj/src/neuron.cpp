#include "fdmsnn/neuron.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdmsnn {

void LifParams::validate() const {
  if (!(capacitance_f > 0.0)) throw std::invalid_argument("lif: capacitance must be positive");
  if (!(leak_conductance_s > 0.0)) throw std::invalid_argument("lif: leak conductance must be positive");
  if (!(v_threshold > v_reset)) throw std::invalid_argument("lif: threshold must exceed reset");
  if (tau_refractory_s < 0.0) throw std::invalid_argument("lif: refractory must be >= 0");
}

LifCoeffs LifCoeffs::make(const LifParams& p, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("lif_step: dt must be positive");
  p.validate();
  LifCoeffs c;
  c.decay = std::exp(-dt_s * p.leak_conductance_s / p.capacitance_f);
  c.gain = (1.0 - c.decay) / p.leak_conductance_s;
  c.v_threshold = p.v_threshold;
  c.v_reset = p.v_reset;
  c.tau_refractory_s = p.tau_refractory_s;
  return c;
}

bool lif_step_coeffs(NeuronState& s, double i_in_a, double dt_s, const LifCoeffs& c, double t_now_s) {
  (void)dt_s;
  if (t_now_s < s.refractory_until_s) {
    s.v = c.v_reset;
    return false;
  }
  // A membrane already at threshold fires regardless of this step's input.
  if (s.v >= c.v_threshold) {
    s.v = c.v_reset;
    s.refractory_until_s = t_now_s + c.tau_refractory_s;
    return true;
  }
  s.v = s.v * c.decay + i_in_a * c.gain;
  if (s.v >= c.v_threshold) {
    s.v = c.v_reset;
    s.refractory_until_s = t_now_s + c.tau_refractory_s;
    return true;
  }
  return false;
}

bool lif_step(NeuronState& s, double i_in_a, double dt_s, const LifParams& p, double t_now_s) {
  return lif_step_coeffs(s, i_in_a, dt_s, LifCoeffs::make(p, dt_s), t_now_s);
}

double lif_constant_current_period_s(double i_in_a, const LifParams& p) {
  const double v_inf = i_in_a / p.leak_conductance_s;
  if (v_inf <= p.v_threshold) return std::numeric_limits<double>::infinity();
  return p.tau_membrane_s() * std::log(v_inf / (v_inf - p.v_threshold)) + p.tau_refractory_s;
}

}  // namespace fdmsnn
