#include "fdmsnn/device.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdmsnn {

void IdealRramParams::validate() const {
  if (!(v_tn < 0.0 && 0.0 < v_tp)) throw std::invalid_argument("ideal rram: need v_tn < 0 < v_tp");
  if (!(g_max > 0.0)) throw std::invalid_argument("ideal rram: g_max must be positive");
  if (!(pump_gain > 0.0)) throw std::invalid_argument("ideal rram: pump gain must be positive");
  if (!(c_state_f > 0.0)) throw std::invalid_argument("ideal rram: state capacitance must be positive");
}

void Hfo2Params::validate() const {
  if (!(v_c_min < v_c_max)) throw std::invalid_argument("hfo2: empty state range");
  if (v_c_max >= -0.48 && v_c_min <= -0.48) throw std::invalid_argument("hfo2: state range crosses the -0.48 singularity");
  if (v_c_max >= 0.0 && v_c_min <= 0.0) throw std::invalid_argument("hfo2: state range crosses zero");
  if (!(area_scale > 0.0)) throw std::invalid_argument("hfo2: area scale must be positive");
}

void QuadraticParams::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("quadratic: k must be positive");
  if (!(v_ref > 0.0)) throw std::invalid_argument("quadratic: v_ref must be positive");
}

void DeviceParams::validate() const {
  ideal.validate();
  hfo2.validate();
  quadratic.validate();
  if (pump.saturation_p < 0.0) throw std::invalid_argument("device: saturation exponent must be >= 0");
}

double DeviceParams::v_c_lower() const {
  switch (model) {
    case DeviceModel::hfo2: return hfo2.v_c_min;
    default: return 0.0;
  }
}

double DeviceParams::v_c_upper() const {
  switch (model) {
    case DeviceModel::hfo2: return hfo2.v_c_max;
    default: return 1.0;
  }
}

DeviceState make_device_state(const DeviceParams& p, double v_c) {
  DeviceState s;
  s.v_c = std::clamp(v_c, p.v_c_lower(), p.v_c_upper());
  return s;
}

double conductance(const DeviceState& s, const DeviceParams& p) {
  switch (p.model) {
    case DeviceModel::ideal:
      return p.ideal.g_max * s.v_c;
    case DeviceModel::hfo2: {
      const double a = std::fabs(s.v_c);
      const double b = s.v_c + 0.48;
      if (a < 1e-12 || std::fabs(b) < 1e-9) throw std::domain_error("hfo2 conductance: state at a singular point");
      return p.hfo2.area_scale * (31.5 / a + 0.127 / (a * b * b));
    }
    case DeviceModel::quadratic:
      return 2.0 * p.quadratic.k * std::fabs(s.v_c);
  }
  throw std::logic_error("unknown device model");
}

std::pair<double, double> thresholds(const DeviceState& s, const DeviceParams& p) {
  if (p.model == DeviceModel::hfo2) {
    return {0.5 - 1e-2 * (s.v_c + 0.5), s.v_c};
  }
  return {p.ideal.v_tp, p.ideal.v_tn};
}

namespace {

// Soft-saturation windows; the normalized position runs 0 at the low-G bound
// and 1 at the high-G bound, matching (G/Gmax) for the ideal map.
double window_set(double v_c, const DeviceParams& p) {
  if (p.pump.saturation_p == 0.0) return 1.0;
  const double pos = (v_c - p.v_c_lower()) / (p.v_c_upper() - p.v_c_lower());
  return std::pow(std::clamp(1.0 - pos, 0.0, 1.0), p.pump.saturation_p);
}

double window_reset(double v_c, const DeviceParams& p) {
  if (p.pump.saturation_p == 0.0) return 1.0;
  const double pos = (v_c - p.v_c_lower()) / (p.v_c_upper() - p.v_c_lower());
  return std::pow(std::clamp(pos, 0.0, 1.0), p.pump.saturation_p);
}

}  // namespace

void state_update(DeviceState& s, double v_a, double dt_s, const DeviceParams& p) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("state_update: dt must be positive");
  if (p.model == DeviceModel::quadratic) return;  // read-nonlinearity study only

  const auto [v_tp, v_tn] = thresholds(s, p);
  const double lo = p.v_c_lower();
  const double hi = p.v_c_upper();

  if (p.pump.law == PumpLaw::rate) {
    double dv = 0.0;
    if (v_a > v_tp) {
      dv = -(p.pump.gain_reset / p.ideal.c_state_f) * (v_a - v_tp) * window_reset(s.v_c, p) * dt_s;
    } else if (v_a < v_tn) {
      dv = -(p.pump.gain_set / p.ideal.c_state_f) * (v_a - v_tn) * window_set(s.v_c, p) * dt_s;
    }
    s.v_c = std::clamp(s.v_c + dv, lo, hi);
    return;
  }

  // Peak law: within one contiguous overdrive episode, only growth of the
  // running peak commits additional change.
  int sign = 0;
  double ovd = 0.0;
  if (v_a > v_tp) {
    sign = 1;
    ovd = v_a - v_tp;
  } else if (v_a < v_tn) {
    sign = -1;
    ovd = v_tn - v_a;
  }
  if (sign == 0) {
    if (s.episode_sign != 0) {
      s.below_time_s += dt_s;
      if (s.below_time_s > p.pump.episode_hold_s) {
        s.episode_sign = 0;
        s.episode_peak = 0.0;
        s.below_time_s = 0.0;
      }
    }
    return;
  }
  s.below_time_s = 0.0;
  if (sign != s.episode_sign) {
    s.episode_sign = sign;
    s.episode_peak = 0.0;
  }
  if (ovd > s.episode_peak) {
    const double grow = ovd - s.episode_peak;
    s.episode_peak = ovd;
    if (sign > 0) {
      s.v_c = std::clamp(s.v_c - p.pump.gain_reset * grow * window_reset(s.v_c, p), lo, hi);
    } else {
      s.v_c = std::clamp(s.v_c + p.pump.gain_set * grow * window_set(s.v_c, p), lo, hi);
    }
  }
}

double dc_current(const DeviceState& s, double v, const DeviceParams& p) {
  if (p.model == DeviceModel::quadratic) return p.quadratic.k * v * std::fabs(v);
  return conductance(s, p) * v;
}

void apply_peak_overdrive(DeviceState& s, double overdrive, bool set_direction, const DeviceParams& p) {
  if (!(overdrive > 0.0)) return;
  const double lo = p.v_c_lower();
  const double hi = p.v_c_upper();
  if (set_direction) {
    s.v_c = std::clamp(s.v_c + p.pump.gain_set * overdrive * window_set(s.v_c, p), lo, hi);
  } else {
    s.v_c = std::clamp(s.v_c - p.pump.gain_reset * overdrive * window_reset(s.v_c, p), lo, hi);
  }
}

double g_read(const QuadraticParams& q, double v_bias, double amplitude) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("g_read: amplitude must be positive");
  q.validate();
  constexpr int kPoints = 2048;
  double b1 = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / kPoints;
    const double sn = std::sin(theta);
    const double v = v_bias + amplitude * sn;
    b1 += q.k * v * std::fabs(v) * sn;
  }
  b1 *= 2.0 / kPoints;
  const double g_iso = 2.0 * q.k * q.v_ref;
  return b1 / (amplitude * g_iso);
}

}  // namespace fdmsnn
