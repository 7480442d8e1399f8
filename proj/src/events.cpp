#include "fdmsnn/events.hpp"

#include <ostream>

namespace fdmsnn {

void write_spike_csv(std::ostream& os, const std::vector<SpikeEvent>& events) {
  os << "neuron_id,time_s\n";
  for (const auto& e : events) os << e.neuron_id << ',' << e.t_s << '\n';
}

}  // namespace fdmsnn
