#pragma once

namespace fdmsnn {

// Leaky integrate-and-fire membrane. C dV/dt = -G V + I, spike at v_threshold,
// reset to v_reset, then hold for tau_refractory ignoring input.
struct LifParams {
  double capacitance_f = 300e-12;
  double leak_conductance_s = 30e-9;
  double v_threshold = 90e-3;
  double v_reset = 0.0;
  double tau_refractory_s = 5e-3;
  double tau_membrane_s() const { return capacitance_f / leak_conductance_s; }
  void validate() const;
};

struct NeuronState {
  double v = 0.0;
  double refractory_until_s = 0.0;
};

// Precomputed per-step update factors; valid for one (params, dt) pair.
struct LifCoeffs {
  double decay = 0.0;       // exp(-dt G / C)
  double gain = 0.0;        // (1 - decay) / G
  double v_threshold = 0.0;
  double v_reset = 0.0;
  double tau_refractory_s = 0.0;

  static LifCoeffs make(const LifParams& p, double dt_s);
};

// Advance one step using the exact exponential update for piecewise-constant
// input. Returns true when the neuron fired during this step.
bool lif_step_coeffs(NeuronState& s, double i_in_a, double dt_s, const LifCoeffs& c, double t_now_s);

bool lif_step(NeuronState& s, double i_in_a, double dt_s, const LifParams& p, double t_now_s);

// Firing period for a constant suprathreshold input, including the
// refractory hold: tau_m * ln(Vinf / (Vinf - Vt)) + tau_ref.
double lif_constant_current_period_s(double i_in_a, const LifParams& p);

}  // namespace fdmsnn
