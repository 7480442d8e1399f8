#pragma once

#include <utility>

namespace fdmsnn {

enum class DeviceModel { ideal, hfo2, quadratic };

// How super-threshold bias pumps the internal state:
//   rate: dVc/dt proportional to the instantaneous overdrive.
//   peak: the committed change per overdrive episode is proportional to the
//         largest overdrive seen in that episode (tracked incrementally, so
//         the update stays causal sample by sample).
enum class PumpLaw { rate, peak };

struct IdealRramParams {
  double c_state_f = 1.0;
  double v_tp = 0.5;
  double v_tn = -0.5;
  double g_max = 700.0;
  double pump_gain = 1.94e4;  // B, rate-law per-volt pump rate
  void validate() const;
};

struct Hfo2Params {
  double v_c_min = -1.2;
  double v_c_max = -0.52;
  double area_scale = 1.0;  // multiplies the conductance map
  void validate() const;
};

struct QuadraticParams {
  double k = 1.0;       // A/V^2 curvature
  double v_ref = 0.3;   // iso-voltage normalization point
  void validate() const;
};

struct PumpConfig {
  PumpLaw law = PumpLaw::rate;
  double gain_set = 1.94e4;    // applied when bias is below v_tn (G grows)
  double gain_reset = 1.94e4;  // applied when bias is above v_tp (G shrinks)
  double saturation_p = 0.0;   // soft-saturation window exponent, 0 = off
  // Peak law: an overdrive episode survives sub-threshold dips shorter than
  // this, so a fast read ripple cannot chop one write event into many.
  double episode_hold_s = 3e-4;
};

struct DeviceParams {
  DeviceModel model = DeviceModel::ideal;
  IdealRramParams ideal;
  Hfo2Params hfo2;
  QuadraticParams quadratic;
  PumpConfig pump;
  void validate() const;

  double v_c_lower() const;
  double v_c_upper() const;
  double v_c_mid() const { return 0.5 * (v_c_lower() + v_c_upper()); }
};

struct DeviceState {
  double v_c = 0.0;
  // Overdrive-episode bookkeeping for the peak law.
  int episode_sign = 0;
  double episode_peak = 0.0;
  double below_time_s = 0.0;
};

DeviceState make_device_state(const DeviceParams& p, double v_c);

// Conductance at the present state. hfo2 follows
//   G(Vc) = 31.5/|Vc| + 0.127/(|Vc| (Vc + 0.48)^2), scaled by area_scale;
// throws std::domain_error at the map's singular points.
double conductance(const DeviceState& s, const DeviceParams& p);

// (v_tp, v_tn). hfo2 thresholds move with the state:
// v_tp = 0.5 - 1e-2 (Vc + 0.5), v_tn = Vc.
std::pair<double, double> thresholds(const DeviceState& s, const DeviceParams& p);

// Advance the state under applied bias v_a for dt. Threshold comparisons are
// strict, so a bias exactly at a threshold never writes. The state is clamped
// to its valid range (pumping stops at the bounds).
void state_update(DeviceState& s, double v_a, double dt_s, const DeviceParams& p);

// Current through the device at bias v: linear conductor at the present
// state for ideal/hfo2, k v |v| for the quadratic model.
double dc_current(const DeviceState& s, double v, const DeviceParams& p);

// Effective read conductance of the quadratic device: fundamental-harmonic
// amplitude of I(v_bias + A sin) divided by A * G_iso, with
// G_iso = 2 k v_ref. Numerical harmonic extraction over one cycle.
double g_read(const QuadraticParams& q, double v_bias, double amplitude);

// Commit one overdrive-episode peak directly (event-level form of the peak
// pump law). set_direction = true grows the conductance.
void apply_peak_overdrive(DeviceState& s, double overdrive, bool set_direction, const DeviceParams& p);

}  // namespace fdmsnn
