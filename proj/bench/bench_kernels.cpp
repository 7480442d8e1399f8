// Kernel benchmark: serial vs OpenMP device-grid ticks on synthetic crossbars.
// Checksums must agree; the parallel path is bit-identical by construction.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fdmsnn/kernels.hpp"
#include "fdmsnn/rng.hpp"

using namespace fdmsnn;
using clock_type = std::chrono::steady_clock;

namespace {

struct BenchGrid {
  int rows, cols;
  std::vector<DeviceState> devices;
  std::vector<double> row_v, col_v, currents;
};

BenchGrid make_grid(int rows, int cols, std::uint64_t seed) {
  DeviceParams p;
  BenchGrid g{rows, cols, {}, {}, {}, {}};
  Rng rng(seed);
  g.devices.reserve(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < rows * cols; ++k) g.devices.push_back(make_device_state(p, rng.uniform(0.0, 1.0)));
  g.row_v.resize(rows);
  g.col_v.resize(cols);
  g.currents.assign(cols, 0.0);
  return g;
}

double run(BenchGrid& g, int ticks, bool parallel, double& checksum) {
  DeviceParams p;
  p.pump.law = PumpLaw::peak;
  p.pump.gain_set = 1e-3;
  p.pump.gain_reset = 1e-3;
  const double dt = 1e-5;
  const auto t0 = clock_type::now();
  checksum = 0.0;
  for (int k = 0; k < ticks; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / 64.0;
    for (int i = 0; i < g.rows; ++i) g.row_v[i] = 0.62 * std::sin(phase + i * 0.1);
    for (int j = 0; j < g.cols; ++j) g.col_v[j] = 0.3 * std::sin(phase * 0.5 + j * 0.2);
    if (parallel) {
      kernels::device_tick_parallel(g.devices, g.rows, g.cols, g.row_v, g.col_v, dt, p, true, g.currents);
    } else {
      kernels::device_tick_serial(g.devices, g.rows, g.cols, g.row_v, g.col_v, dt, p, true, g.currents);
    }
    for (int j = 0; j < g.cols; ++j) checksum += g.currents[j];
  }
  const auto t1 = clock_type::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp: %d threads available\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif
  std::printf("%8s %8s %6s  %12s %12s %8s  %s\n", "rows", "cols", "ticks", "serial_s", "parallel_s",
              "speedup", "checksum_match");
  const int configs[][3] = {{16, 3, 20000}, {64, 16, 5000}, {256, 64, 1000}, {512, 128, 400}};
  for (const auto& cfg : configs) {
    BenchGrid a = make_grid(cfg[0], cfg[1], 7);
    BenchGrid b = a;
    double cks = 0.0, ckp = 0.0;
    const double ts = run(a, cfg[2], false, cks);
    const double tp = run(b, cfg[2], true, ckp);
    std::printf("%8d %8d %6d  %12.4f %12.4f %8.2f  %s\n", cfg[0], cfg[1], cfg[2], ts, tp, ts / tp,
                cks == ckp ? "yes" : "NO");
    if (cks != ckp) return 1;
  }
  return 0;
}
