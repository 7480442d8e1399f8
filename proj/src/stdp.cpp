#include "fdmsnn/stdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdmsnn {

void StdpParams::validate() const {
  if (!(tau_plus_s > 0.0) || !(tau_minus_s > 0.0)) throw std::invalid_argument("stdp: time constants must be positive");
  if (p < 0.0) throw std::invalid_argument("stdp: p must be >= 0");
  if (!(g_max > 0.0)) throw std::invalid_argument("stdp: g_max must be positive");
}

double apply_stdp(double g, double delta_t_s, const StdpParams& s) {
  const double gn = std::clamp(g / s.g_max, 0.0, 1.0);
  double raw;
  if (delta_t_s >= 0.0) {
    raw = std::fabs(s.a_plus) * std::exp(-delta_t_s / s.tau_plus_s) * std::pow(1.0 - gn, s.p);
  } else {
    raw = -std::fabs(s.a_minus) * std::exp(delta_t_s / s.tau_minus_s) * std::pow(gn, s.p);
  }
  return std::clamp(g + raw, 0.0, s.g_max) - g;
}

}  // namespace fdmsnn
