#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h2plan {

// All stored values are SI: Pa, m, W, kg/J, EUR per year, EUR/J.

struct Node {
  std::string id;
  double pressure_min = 0.0;  // Pa
  double pressure_max = 0.0;  // Pa
  bool has_demand = false;    // loader requires a demand column when set
};

struct DiameterOption {
  double diameter = 0.0;     // m
  double friction = 0.0;     // Nikuradse friction factor (dimensionless)
  double invest_cost = 0.0;  // EUR/year, annualized
};

struct CandidatePipeline {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;  // m
  std::vector<DiameterOption> catalog;
  // Pipe-level pressure envelope; defaults to the endpoint node bounds.
  std::optional<double> pressure_min;  // Pa
  std::optional<double> pressure_max;  // Pa
};

enum class CompressorControl {
  FixedRatio,  // head pressure = ratio * tail pressure
  BoostRange,  // tail pressure <= head pressure <= ratio * tail pressure
};

struct Compressor {
  std::string id;
  std::string from;
  std::string to;
  double ratio = 1.0;
  CompressorControl control = CompressorControl::FixedRatio;
};

struct ElectrolyzerSite {
  std::string id;
  std::string node;
  double efficiency = 0.0;     // kg/J
  double unit_capacity = 0.0;  // W per unit
  double max_units = 0.0;      // expansion limit, continuous
  double invest_cost = 0.0;    // EUR/year per unit
  std::string availability_series;      // key into Scenario::availability
  std::string electricity_cost_series;  // key into Scenario::electricity_cost
};

struct NetworkTopology {
  std::string name;
  double sound_speed = 1320.0;  // m/s, isothermal speed of sound in hydrogen
  std::vector<Node> nodes;
  std::vector<CandidatePipeline> pipelines;
  std::vector<Compressor> compressors;
  std::vector<ElectrolyzerSite> electrolyzers;

  const Node* find_node(const std::string& id) const;
  int node_index(const std::string& id) const;  // -1 when absent
};

// Effective pressure envelope of a pipeline (explicit values or endpoint
// defaults). Throws std::invalid_argument when an endpoint is unknown.
std::pair<double, double> pipeline_pressure_bounds(const NetworkTopology& net,
                                                   const CandidatePipeline& pipe);

std::string to_string(CompressorControl c);
CompressorControl compressor_control_from_string(const std::string& s);

}  // namespace h2plan
