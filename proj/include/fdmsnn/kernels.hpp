#pragma once

#include <span>

#include "fdmsnn/device.hpp"

namespace fdmsnn::kernels {

// One crossbar tick over the m x n device grid. For device (i, j):
//   v_ij = row_v[i] - col_v[j]
//   col_current[j] += dc_current(device, v_ij)
//   state_update(device, v_ij, dt)           when writes_enabled
// Devices are stored column-major (index j*m + i), so each column's devices
// are contiguous and columns are independent work items.

void device_tick_serial(std::span<DeviceState> devices, int rows, int cols,
                        std::span<const double> row_v, std::span<const double> col_v,
                        double dt_s, const DeviceParams& params, bool writes_enabled,
                        std::span<double> col_current_out);

// OpenMP variant, parallel over columns. Per-column sums run in index order,
// so the result is bit-identical to the serial kernel for any thread count.
void device_tick_parallel(std::span<DeviceState> devices, int rows, int cols,
                          std::span<const double> row_v, std::span<const double> col_v,
                          double dt_s, const DeviceParams& params, bool writes_enabled,
                          std::span<double> col_current_out);

// Dispatch on grid size; small grids stay serial.
void device_tick(std::span<DeviceState> devices, int rows, int cols,
                 std::span<const double> row_v, std::span<const double> col_v,
                 double dt_s, const DeviceParams& params, bool writes_enabled,
                 std::span<double> col_current_out, int parallel_min_devices);

}  // namespace fdmsnn::kernels
