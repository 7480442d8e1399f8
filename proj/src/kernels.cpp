#include "fdmsnn/kernels.hpp"

#include <cassert>

namespace fdmsnn::kernels {

namespace {

inline double column_pass(DeviceState* devices, int rows, const double* row_v, double col_v,
                          double dt_s, const DeviceParams& params, bool writes_enabled) {
  double sum = 0.0;
  for (int i = 0; i < rows; ++i) {
    DeviceState& d = devices[i];
    const double v = row_v[i] - col_v;
    sum += dc_current(d, v, params);
    if (writes_enabled) state_update(d, v, dt_s, params);
  }
  return sum;
}

}  // namespace

void device_tick_serial(std::span<DeviceState> devices, int rows, int cols,
                        std::span<const double> row_v, std::span<const double> col_v,
                        double dt_s, const DeviceParams& params, bool writes_enabled,
                        std::span<double> col_current_out) {
  assert(devices.size() == static_cast<std::size_t>(rows) * cols);
  for (int j = 0; j < cols; ++j) {
    col_current_out[j] = column_pass(devices.data() + static_cast<std::size_t>(j) * rows, rows,
                                     row_v.data(), col_v[j], dt_s, params, writes_enabled);
  }
}

void device_tick_parallel(std::span<DeviceState> devices, int rows, int cols,
                          std::span<const double> row_v, std::span<const double> col_v,
                          double dt_s, const DeviceParams& params, bool writes_enabled,
                          std::span<double> col_current_out) {
  assert(devices.size() == static_cast<std::size_t>(rows) * cols);
  DeviceState* base = devices.data();
  const double* rv = row_v.data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < cols; ++j) {
    col_current_out[j] = column_pass(base + static_cast<std::size_t>(j) * rows, rows, rv, col_v[j],
                                     dt_s, params, writes_enabled);
  }
}

void device_tick(std::span<DeviceState> devices, int rows, int cols,
                 std::span<const double> row_v, std::span<const double> col_v,
                 double dt_s, const DeviceParams& params, bool writes_enabled,
                 std::span<double> col_current_out, int parallel_min_devices) {
  if (rows * cols >= parallel_min_devices && cols > 1) {
    device_tick_parallel(devices, rows, cols, row_v, col_v, dt_s, params, writes_enabled, col_current_out);
  } else {
    device_tick_serial(devices, rows, cols, row_v, col_v, dt_s, params, writes_enabled, col_current_out);
  }
}

}  // namespace fdmsnn::kernels
