#pragma once

#include <map>
#include <string>
#include <vector>

namespace h2plan {

enum class FlowModelChoice {
  Dynamic,
  SteadyState,
  Transport,
  TransportLinepack,
};

std::string to_string(FlowModelChoice m);
FlowModelChoice flow_model_from_string(const std::string& s);

// Time-varying data for one representative operating period. All SI.
struct Scenario {
  double step = 3600.0;  // s per time step
  int horizon = 0;       // number of steps
  // site id or series key -> per-step available power per unit [W]
  std::map<std::string, std::vector<double>> availability;
  // series key -> per-step electricity price [EUR/J]
  std::map<std::string, std::vector<double>> electricity_cost;
  // node id -> per-step hydrogen demand [kg/s]; absent node means zero
  std::map<std::string, std::vector<double>> demand;
  double ns_penalty = 0.0;  // EUR/kg for non-supplied hydrogen

  // Weight that scales the representative period to one year of operation.
  double annualization_weight() const {
    return 8760.0 * 3600.0 / (step * static_cast<double>(horizon));
  }

  double demand_at(const std::string& node, int t) const;
  // Annualized total demand [kg/year].
  double annual_demand() const;
};

// Returns a copy with every demand entry multiplied by `factor`.
Scenario scale_demand(const Scenario& s, double factor);

}  // namespace h2plan
