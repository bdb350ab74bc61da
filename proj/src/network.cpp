#include "h2plan/network.hpp"

#include <stdexcept>

namespace h2plan {

const Node* NetworkTopology::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

int NetworkTopology::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

std::pair<double, double> pipeline_pressure_bounds(const NetworkTopology& net,
                                                  const CandidatePipeline& pipe) {
  const Node* a = net.find_node(pipe.from);
  const Node* b = net.find_node(pipe.to);
  if (!a || !b)
    throw std::invalid_argument("pipeline " + pipe.id + " references unknown node");
  double lo = pipe.pressure_min ? *pipe.pressure_min
                                : std::min(a->pressure_min, b->pressure_min);
  double hi = pipe.pressure_max ? *pipe.pressure_max
                                : std::max(a->pressure_max, b->pressure_max);
  return {lo, hi};
}

std::string to_string(CompressorControl c) {
  switch (c) {
    case CompressorControl::FixedRatio: return "fixed-ratio";
    case CompressorControl::BoostRange: return "boost-range";
  }
  return "?";
}

CompressorControl compressor_control_from_string(const std::string& s) {
  if (s == "fixed-ratio") return CompressorControl::FixedRatio;
  if (s == "boost-range") return CompressorControl::BoostRange;
  throw std::invalid_argument("unknown compressor control '" + s + "'");
}

}  // namespace h2plan
