#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdmsnn/reference_snn.hpp"
#include "fdmsnn/rng.hpp"
#include "fdmsnn/stdp.hpp"

using namespace fdmsnn;

TEST_CASE("pair rule landmarks") {
  StdpParams s;
  CHECK(apply_stdp(0.0, 1e-9, s) == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(apply_stdp(700.0, -20e-3, s) == doctest::Approx(-15.0 * std::exp(-1.0)).epsilon(1e-9));
  CHECK(apply_stdp(700.0, 5e-3, s) == doctest::Approx(0.0));
}

TEST_CASE("pair rule polarity") {
  StdpParams s;
  Rng rng(1);
  for (int k = 0; k < 300; ++k) {
    const double g = rng.uniform(1.0, 699.0);
    const double dt = rng.uniform(1e-4, 80e-3);
    CHECK(apply_stdp(g, dt, s) >= 0.0);
    CHECK(apply_stdp(g, -dt, s) <= 0.0);
  }
}

TEST_CASE("pair rule keeps weights in range") {
  StdpParams s;
  Rng rng(2);
  double g = 350.0;
  for (int k = 0; k < 5000; ++k) {
    g += apply_stdp(g, rng.uniform(-50e-3, 50e-3), s);
    CHECK(g >= 0.0);
    CHECK(g <= s.g_max);
  }
}

TEST_CASE("with p=0 the window is a pure exponential") {
  StdpParams s;
  s.p = 0.0;
  // log|dG| regressed on |dt| must be affine with R^2 > 0.9999.
  std::vector<double> xs, ys;
  for (double dt = 1e-3; dt <= 60e-3; dt += 1e-3) {
    xs.push_back(dt);
    ys.push_back(std::log(std::fabs(apply_stdp(350.0, dt, s))));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(r * r > 0.9999);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-1.0 / s.tau_plus_s).epsilon(1e-6));
}

namespace {

RefConfig small_net(int rows, int cols) {
  RefConfig cfg;
  cfg.rows = rows;
  cfg.cols = cols;
  return cfg;
}

}  // namespace

TEST_CASE("zero weights never drive the output layer") {
  RefConfig cfg = small_net(4, 2);
  RefNetwork net(cfg);
  std::vector<double> zeros(4 * 2, 0.0);
  net.set_weight_positions(zeros);
  std::vector<double> drive(4, 1.2e-8);  // inputs fire hard
  for (double t = 0.0; t < 0.2; t += cfg.dt_s) net.step(drive, {});
  bool output_spiked = false;
  for (const auto& e : net.events()) {
    if (e.neuron_id >= 4) output_spiked = true;
  }
  CHECK_FALSE(output_spiked);
}

TEST_CASE("single pre spike produces the alpha kernel current") {
  RefConfig cfg = small_net(1, 1);
  RefNetwork net(cfg);
  std::vector<double> w{1.0};  // position -> G = 700
  net.set_weight_positions(w);
  net.set_plastic(false);

  std::vector<double> kick(1, 1e-5);
  std::vector<double> none(1, 0.0);
  net.step(kick, {});
  REQUIRE(net.events().size() == 1);
  const double t_spike = net.events()[0].t_s;

  const double g = 700.0;
  double peak_net = 0.0, peak_t = 0.0, worst = 0.0;
  for (long k = 0; k < 4000; ++k) {
    const double t = net.time_s();
    net.step(none, {});
    const double expected = g * alpha_response(t - t_spike + cfg.dt_s, cfg.alpha);
    worst = std::max(worst, std::fabs(net.synaptic_current(0) - expected));
    if (net.synaptic_current(0) > peak_net) {
      peak_net = net.synaptic_current(0);
      peak_t = t - t_spike;
    }
  }
  CHECK(worst <= 1e-3 * g * cfg.alpha.v0 * 0.53501);
  // Peak at ~4.02 ms with value G * v0 * 0.53501.
  CHECK(peak_t == doctest::Approx(4.024e-3).epsilon(0.02));
  CHECK(peak_net == doctest::Approx(g * cfg.alpha.v0 * 0.53501).epsilon(2e-3));
}

TEST_CASE("alpha accumulator equals direct kernel convolution") {
  // Random spike train into one synapse; the two-accumulator state equals
  // the sum of shifted kernels within 0.1%.
  RefConfig cfg = small_net(1, 1);
  AlphaParams a = cfg.alpha;
  Rng rng(9);
  std::vector<long> spike_steps;
  double t = 1e-3;
  while (t < 80e-3) {
    spike_steps.push_back(std::lround(t / cfg.dt_s));
    t += rng.uniform(2e-3, 9e-3);
  }
  const double g = 320.0;
  const double dt = cfg.dt_s;
  double slow = 0.0, fast = 0.0;
  const double ds = std::exp(-dt / a.tau2_s);
  const double df = std::exp(-dt / a.tau1_s);
  std::size_t next = 0;
  double worst = 0.0, scale = 0.0;
  for (long step = 0; step < 12000; ++step) {
    if (next < spike_steps.size() && step >= spike_steps[next]) {
      slow += g;
      fast += g;
      ++next;
    }
    slow *= ds;
    fast *= df;
    const double state_i = a.v0 * (slow - fast);
    double kernel_i = 0.0;
    for (std::size_t k = 0; k < next; ++k) {
      // One-step decay offset: the accumulator decays immediately after add.
      kernel_i += g * alpha_response(dt * static_cast<double>(step + 1 - spike_steps[k]), a);
    }
    worst = std::max(worst, std::fabs(state_i - kernel_i));
    scale = std::max(scale, std::fabs(kernel_i));
  }
  CHECK(worst <= 1e-3 * scale);
}

TEST_CASE("two pre spikes one millisecond apart superpose linearly") {
  RefConfig cfg = small_net(1, 1);
  cfg.input_lif.tau_refractory_s = 0.0;
  RefNetwork net(cfg);
  std::vector<double> w{0.6};
  net.set_weight_positions(w);
  net.set_plastic(false);
  const double g = net.weights()[0];

  std::vector<double> none(1, 0.0);
  std::vector<double> kick(1, 1e-5);
  std::vector<double> spike_times;
  for (long k = 0; k < 5000; ++k) {
    const double t = net.time_s();
    const bool fire = k == 50 || k == 150;  // 1 ms apart
    net.step(fire ? kick : none, {});
    if (fire) spike_times.push_back(t);
    if (spike_times.size() == 2 && k > 200) {
      double expected = 0.0;
      for (double s : spike_times) expected += g * alpha_response(t - s + cfg.dt_s, cfg.alpha);
      CHECK(net.synaptic_current(0) == doctest::Approx(expected).epsilon(2e-3));
    }
  }
  REQUIRE(spike_times.size() == 2);
}

TEST_CASE("eq7 factor values") {
  RefConfig cfg = small_net(1, 1);
  cfg.read_model = ReadModel::eq7_quadratic;
  cfg.eq7_amplitude_v = 0.3;
  RefNetwork net(cfg);
  // No spikes yet: zero bias.
  const double f0 = net.eq7_factor(0, 0.0);
  CHECK(f0 == doctest::Approx(4.0 * 0.3 / (3.0 * 3.14159265358979 * 0.3)).epsilon(2e-3));

  RefConfig ideal_cfg = small_net(1, 1);
  RefNetwork ideal_net(ideal_cfg);
  CHECK(ideal_net.eq7_factor(0, 0.0) == 1.0);
}

TEST_CASE("weights remain in range under random spike bombardment") {
  RefConfig cfg = small_net(6, 3);
  RefNetwork net(cfg);
  Rng rng(23);
  std::vector<double> init(18);
  for (auto& v : init) v = rng.uniform(0.0, 1.0);
  net.set_weight_positions(init);
  std::vector<double> drive(6);
  std::vector<double> bias(3);
  for (double t = 0.0; t < 0.3; t += cfg.dt_s) {
    for (auto& d : drive) d = rng.uniform() < 0.3 ? 1.5e-8 : 0.0;
    for (auto& b : bias) b = rng.uniform() < 0.3 ? 6e-9 : 0.0;
    net.step(drive, bias);
  }
  for (double g : net.weights()) {
    CHECK(g >= 0.0);
    CHECK(g <= cfg.stdp.g_max);
  }
}
