#include "h2plan/scenario.hpp"

#include <stdexcept>

namespace h2plan {

std::string to_string(FlowModelChoice m) {
  switch (m) {
    case FlowModelChoice::Dynamic: return "dynamic";
    case FlowModelChoice::SteadyState: return "steady";
    case FlowModelChoice::Transport: return "transport";
    case FlowModelChoice::TransportLinepack: return "transport-linepack";
  }
  return "?";
}

FlowModelChoice flow_model_from_string(const std::string& s) {
  if (s == "dynamic") return FlowModelChoice::Dynamic;
  if (s == "steady") return FlowModelChoice::SteadyState;
  if (s == "transport") return FlowModelChoice::Transport;
  if (s == "transport-linepack") return FlowModelChoice::TransportLinepack;
  throw std::invalid_argument("unknown flow model '" + s + "'");
}

double Scenario::demand_at(const std::string& node, int t) const {
  auto it = demand.find(node);
  if (it == demand.end()) return 0.0;
  return it->second.at(static_cast<size_t>(t));
}

double Scenario::annual_demand() const {
  double per_period = 0.0;
  for (const auto& [node, series] : demand)
    for (double v : series) per_period += v * step;
  return annualization_weight() * per_period;
}

Scenario scale_demand(const Scenario& s, double factor) {
  if (!(factor >= 0.0))
    throw std::invalid_argument("demand scale factor must be non-negative");
  Scenario out = s;
  for (auto& [node, series] : out.demand)
    for (double& v : series) v *= factor;
  return out;
}

}  // namespace h2plan
