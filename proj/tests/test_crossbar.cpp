#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdmsnn/crossbar.hpp"

using namespace fdmsnn;

namespace {

EngineConfig base_config() {
  EngineConfig c;
  c.rows = 1;
  c.cols = 1;
  c.device.pump.law = PumpLaw::peak;
  derive_pump_gains(c.device, 9.0, 10e-3, -15.0, 20e-3, c.pre_pulse, c.post_pulse);
  c.device.pump.saturation_p = 0.0;
  return c;
}

}  // namespace

TEST_CASE("quiescent network stays silent") {
  EngineConfig c = base_config();
  c.rows = 3;
  c.cols = 2;
  c.kappa = 1.0;
  CrossbarEngine e(c);
  std::vector<double> zeros(6, 0.0);
  e.set_weight_positions(zeros);
  for (int k = 0; k < 5000; ++k) e.step({}, {});
  CHECK(e.events().empty());
  CHECK(e.impulses().empty());
  for (double g : e.weights()) CHECK(g == 0.0);
}

TEST_CASE("calibration zeroes the error at the calibration point") {
  EngineConfig c = base_config();
  const double kappa = calibrate_kappa(c);
  CHECK(kappa > 0.0);
  c.kappa = kappa;

  CrossbarEngine e(c);
  e.set_writes_enabled(false);
  std::vector<double> mid{0.5};
  e.set_weight_positions(mid);
  e.force_pre_spike(0);
  for (int k = 0; k < 400; ++k) e.step({}, {});
  REQUIRE(e.impulses().size() == 1);
  CHECK(e.impulses()[0].value == doctest::Approx(350.0).epsilon(1e-6));
}

TEST_CASE("read path is linear: quarter-range device reads within 2 percent") {
  EngineConfig c = base_config();
  c.kappa = calibrate_kappa(c);
  CrossbarEngine e(c);
  e.set_writes_enabled(false);
  std::vector<double> quarter{0.25};
  e.set_weight_positions(quarter);
  e.force_pre_spike(0);
  for (int k = 0; k < 400; ++k) e.step({}, {});
  REQUIRE(e.impulses().size() == 1);
  CHECK(e.impulses()[0].value == doctest::Approx(175.0).epsilon(0.02));
}

TEST_CASE("kappa scales inversely with the read amplitude") {
  EngineConfig c = base_config();
  const double k1 = calibrate_kappa(c);
  c.read.amplitude_v = 0.2;
  const double k2 = calibrate_kappa(c);
  CHECK(k1 / k2 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("simultaneous reads superpose at the sense node") {
  EngineConfig c = base_config();
  c.rows = 2;
  c.cols = 1;
  c.kappa = calibrate_kappa(c);

  auto run = [&](bool fire0, bool fire1) {
    CrossbarEngine e(c);
    e.set_writes_enabled(false);
    std::vector<double> w{0.55, 0.3};
    e.set_weight_positions(w);
    if (fire0) e.force_pre_spike(0);
    if (fire1) e.force_pre_spike(1);
    for (int k = 0; k < 400; ++k) e.step({}, {});
    REQUIRE(e.impulses().size() == 1);
    return e.impulses()[0].value;
  };

  const double both = run(true, true);
  const double only0 = run(true, false);
  const double only1 = run(false, true);
  CHECK(both == doctest::Approx(only0 + only1).epsilon(0.005));
}

TEST_CASE("identical seeds give identical event logs") {
  EngineConfig c = base_config();
  auto run = [&] {
    std::vector<ReadValidationEvent> ev = run_read_validation(40, 1234, c, 5e-3, 50e-3);
    std::vector<double> sig;
    for (const auto& e : ev) {
      sig.push_back(e.t_s);
      sig.push_back(e.g_estimate);
    }
    return sig;
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("stdp sweep polarity and window decay") {
  EngineConfig c = base_config();
  const std::vector<double> dts{10e-3, -10e-3, 0.2};
  const auto rows = run_stdp_sweep(dts, c, 9.0, 10e-3, -15.0, 20e-3, 0.0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].dg_circuit > 0.0);   // pre before post potentiates
  CHECK(rows[1].dg_circuit < 0.0);   // post before pre depresses
  CHECK(std::fabs(rows[2].dg_circuit) < 0.01 * std::fabs(rows[0].dg_circuit));
  // Calibrated gains put the +-10 ms points close to the pair rule.
  CHECK(rows[0].dg_circuit == doctest::Approx(rows[0].dg_eq4).epsilon(0.05));
  CHECK(rows[1].dg_circuit == doctest::Approx(rows[1].dg_eq4).epsilon(0.05));
}

TEST_CASE("pure read path error stays tiny with writes disabled") {
  EngineConfig c = base_config();
  c.kappa = calibrate_kappa(c);
  // Same harness as the validation run but with writes off.
  CrossbarEngine e(c);
  e.set_writes_enabled(false);
  std::vector<double> mid{0.37};
  e.set_weight_positions(mid);
  const double g_ref = e.weights()[0];
  double worst = 0.0;
  for (int burst = 0; burst < 20; ++burst) {
    e.force_pre_spike(0);
    const std::size_t before = e.impulses().size();
    while (e.impulses().size() == before) e.step({}, {});
    worst = std::max(worst, std::fabs(e.impulses().back().value - g_ref) / g_ref);
    for (int k = 0; k < 700; ++k) e.step({}, {});
  }
  CHECK(worst < 0.005);
}

TEST_CASE("conductance stays in range through a noisy run") {
  EngineConfig c = base_config();
  c.device.pump.saturation_p = 1.7;
  c.kappa = calibrate_kappa(c);
  const auto events = run_read_validation(60, 77, c, 5e-3, 30e-3);
  CHECK(static_cast<int>(events.size()) == 60);
  for (const auto& ev : events) {
    CHECK(ev.g_actual >= 0.0);
    CHECK(ev.g_actual <= 700.0);
  }
}

TEST_CASE("bypassing the filter wrecks the read") {
  EngineConfig c = base_config();
  c.filter_enabled = false;
  c.kappa = calibrate_kappa(c);
  const auto events = run_read_validation(60, 4321, c, 5e-3, 50e-3);
  double worst = 0.0;
  for (const auto& ev : events) worst = std::max(worst, ev.rel_error);
  CHECK(worst > 0.10);
}

TEST_CASE("input vector size is checked") {
  EngineConfig c = base_config();
  c.rows = 4;
  c.cols = 2;
  CrossbarEngine e(c);
  std::vector<double> bad(3, 0.0);
  CHECK_THROWS(e.step(bad, {}));
}
