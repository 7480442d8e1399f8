#pragma once

#include <iosfwd>
#include <vector>

namespace fdmsnn {

// One spike. Input neurons occupy ids [0, rows); outputs [rows, rows+cols).
struct SpikeEvent {
  int neuron_id = 0;
  double t_s = 0.0;
  bool operator==(const SpikeEvent&) const = default;
};

void write_spike_csv(std::ostream& os, const std::vector<SpikeEvent>& events);

}  // namespace fdmsnn
