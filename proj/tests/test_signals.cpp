#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fdmsnn/rng.hpp"
#include "fdmsnn/signals.hpp"

using namespace fdmsnn;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("alpha response boundaries") {
  AlphaParams p;
  CHECK(alpha_response(0.0, p) == doctest::Approx(0.0));
  CHECK(alpha_response(-1e-3, p) == doctest::Approx(0.0));
  CHECK(alpha_response(10.0, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("alpha argmax matches a dense grid scan") {
  AlphaParams p;
  // Independent oracle: brute-force scan.
  double best_t = 0.0, best_v = -1.0;
  for (double t = 0.0; t < 30e-3; t += 1e-7) {
    const double v = alpha_response(t, p);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  CHECK(alpha_argmax_s(p) == doctest::Approx(best_t).epsilon(1e-4));
  CHECK(alpha_argmax_s(p) == doctest::Approx(4.024e-3).epsilon(0.01));
  CHECK(best_v == doctest::Approx(p.v0 * 0.53501).epsilon(1e-3));
}

TEST_CASE("alpha is nonnegative and integrates to v0*(tau2-tau1)") {
  AlphaParams p;
  double integral = 0.0;
  const double dt = 1e-6;
  for (double t = 0.0; t < 0.2; t += dt) {
    const double v = alpha_response(t, p);
    CHECK(v >= 0.0);
    integral += v * dt;
  }
  CHECK(integral == doctest::Approx(p.v0 * (p.tau2_s - p.tau1_s)).epsilon(1e-3));
}

TEST_CASE("write pulse hits its landmarks") {
  WritePulseParams p;
  CHECK(write_pulse(p.period_s / 4.0, p) == doctest::Approx(0.5));
  CHECK(write_pulse(0.75 * p.period_s, p) == doctest::Approx(-0.5));
  CHECK(write_pulse(0.75 * p.period_s - 1e-12, p) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(write_pulse(0.75 * p.period_s + p.tau_tail_s, p) == doctest::Approx(-0.5 * std::exp(-1.0)).epsilon(1e-9));
  CHECK(write_pulse(-1e-9, p) == 0.0);
}

TEST_CASE("write pulse is continuous and peaks exactly at the amplitude") {
  WritePulseParams p;
  double prev = write_pulse(0.0, p);
  double peak = 0.0;
  double max_jump = 0.0;
  const double dt = 1e-7;
  for (double t = dt; t < 30e-3; t += dt) {
    const double v = write_pulse(t, p);
    max_jump = std::max(max_jump, std::fabs(v - prev));
    peak = std::max(peak, std::fabs(v));
    prev = v;
  }
  // Steepest slope is the sine edge: amplitude * 2*pi/T * dt.
  CHECK(max_jump <= p.amplitude_v * 2.0 * kPi / p.period_s * dt * 1.01);
  CHECK(peak == doctest::Approx(p.amplitude_v));
}

TEST_CASE("read burst gating and amplitude") {
  ReadBurstParams p;
  CHECK(read_burst(0.9e-3, 1e-3, p) == 0.0);
  CHECK(read_burst(1e-3 + p.duration_s + 1e-9, 1e-3, p) == 0.0);
  double peak = 0.0;
  for (double t = 1e-3; t < 1e-3 + p.duration_s; t += 1e-7) {
    peak = std::max(peak, read_burst(t, 1e-3, p));
  }
  CHECK(peak == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("read bursts are globally phase locked") {
  ReadBurstParams p;
  // Two bursts opened at different spike times sample the same sinusoid.
  const double t = 2.1e-3;
  CHECK(read_burst(t, 1.9e-3, p) == doctest::Approx(read_burst(t, 0.5e-3 + p.period_s, p)));
}

TEST_CASE("hpf magnitude closed form") {
  HpfParams p;
  CHECK(hpf_magnitude(0.0, p) == 0.0);
  CHECK(hpf_magnitude(p.omega_3db_rad_s, p) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(hpf_magnitude(1e9, p) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(hpf_magnitude(p.omega_3db_rad_s, p) == doctest::Approx(0.7071).epsilon(0.005));
  // Monotone increasing.
  double prev = 0.0;
  for (double w = 1e2; w < 1e7; w *= 1.5) {
    const double m = hpf_magnitude(w, p);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("hpf rejects the write-pulse fundamental hard enough") {
  HpfParams p;
  const double r = hpf_magnitude(2.0 * kPi * 500.0, p);
  CHECK(r < 1e-6);
  // Worst-case low-frequency leak budget: m rows, write k times the read.
  CHECK(16.0 * 5.0 * r < 1e-3);
}

TEST_CASE("hpf_step steady-state gain matches the magnitude formula") {
  HpfParams p;
  HpfCascade f(p);
  const double freq = 1e4;
  const double dt = 2e-6;
  double peak = 0.0;
  for (double t = 0.0; t < 30.0 / freq; t += dt) {
    const double y = f.step(std::sin(2.0 * kPi * freq * t), dt);
    if (t > 20.0 / freq) peak = std::max(peak, std::fabs(y));
  }
  CHECK(peak == doctest::Approx(hpf_magnitude(2.0 * kPi * freq, p)).epsilon(0.02));
}

TEST_CASE("hpf_step blocks DC and stays bounded on random input") {
  HpfParams p;
  HpfCascade f(p);
  const double dt = 5e-6;
  double y = 0.0;
  for (int k = 0; k < 20000; ++k) y = f.step(1.0, dt);
  CHECK(std::fabs(y) < 1e-9);

  f.reset();
  Rng rng(7);
  double biggest = 0.0;
  for (int k = 0; k < 20000; ++k) {
    biggest = std::max(biggest, std::fabs(f.step(rng.uniform(-1.0, 1.0), dt)));
  }
  CHECK(biggest < 10.0);
  CHECK(std::isfinite(biggest));
}

TEST_CASE("hpf_step is time invariant") {
  HpfParams p;
  const double dt = 5e-6;
  Rng rng(11);
  std::vector<double> x(4000);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);

  HpfCascade a(p);
  std::vector<double> ya;
  for (double v : x) ya.push_back(a.step(v, dt));

  const int shift = 137;
  HpfCascade b(p);
  std::vector<double> yb;
  for (int k = 0; k < shift; ++k) yb.push_back(b.step(0.0, dt));
  for (double v : x) yb.push_back(b.step(v, dt));

  for (std::size_t k = 0; k < ya.size(); ++k) {
    CHECK(yb[k + shift] == doctest::Approx(ya[k]).epsilon(1e-12));
  }
}

TEST_CASE("hpf_step rejects non-positive dt") {
  HpfCascade f{HpfParams{}};
  CHECK_THROWS(f.step(1.0, 0.0));
  CHECK_THROWS(f.step(1.0, -1e-6));
}

TEST_CASE("envelope of sinusoids") {
  SignalTrace tr;
  tr.dt_s = 1e-6;
  const double a1 = 0.37, a2 = 0.21;
  const double freq = 1e4;
  for (int k = 0; k < 1000; ++k) {
    tr.values.push_back(a1 * std::sin(2.0 * kPi * freq * k * tr.dt_s));
  }
  CHECK(envelope_extract(tr, 0.0, 1e-3) == doctest::Approx(a1).epsilon(1e-4));

  SignalTrace two = tr;
  for (int k = 0; k < 1000; ++k) {
    two.values[k] += a2 * std::sin(2.0 * kPi * freq * k * two.dt_s);
  }
  // Phase-locked equal-frequency components add as amplitudes.
  CHECK(envelope_extract(two, 0.0, 1e-3) == doctest::Approx(a1 + a2).epsilon(1e-4));

  SignalTrace zeros;
  zeros.dt_s = 1e-6;
  zeros.values.assign(100, 0.0);
  CHECK(envelope_extract(zeros, 0.0, 1e-4) == 0.0);
  CHECK_THROWS(envelope_extract(zeros, 2e-4, 3e-4));
  CHECK_THROWS(envelope_extract(zeros, 5e-5, 1e-5));
}

TEST_CASE("parameter validation") {
  AlphaParams a;
  a.tau1_s = a.tau2_s;
  CHECK_THROWS(a.validate());
  ReadBurstParams r;
  r.duration_s = r.period_s / 2.0;
  CHECK_THROWS(r.validate());
  HpfParams h;
  h.order = 0;
  CHECK_THROWS(h.validate());
}
