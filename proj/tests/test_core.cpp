#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "h2plan/network.hpp"
#include "h2plan/pipe_physics.hpp"
#include "h2plan/scenario.hpp"
#include "h2plan/validation.hpp"

using namespace h2plan;

namespace {

// Minimal well-formed case: source node with an electrolyzer, one pipe to a
// demand node, one compressor, two time steps.
NetworkTopology small_net() {
  NetworkTopology net;
  net.name = "small";
  net.nodes = {{"i1", 4e6, 7e6, false}, {"i2", 4e6, 7e6, true},
               {"i3", 4e6, 7e6, false}};
  CandidatePipeline p;
  p.id = "p1";
  p.from = "i1";
  p.to = "i2";
  p.length = 60e3;
  p.catalog = {
      {0.5, physics::nikuradse_friction(0.5, physics::default_roughness), 1e5},
      {0.9, physics::nikuradse_friction(0.9, physics::default_roughness), 3e5}};
  net.pipelines = {p};
  net.compressors = {{"c1", "i2", "i3", 1.4, CompressorControl::BoostRange}};
  ElectrolyzerSite e;
  e.id = "e1";
  e.node = "i1";
  e.efficiency = 18.2 / 3.6e9;
  e.unit_capacity = 100e6;
  e.max_units = 10.0;
  e.invest_cost = 75e3;
  e.availability_series = "wind";
  e.electricity_cost_series = "wind";
  net.electrolyzers = {e};
  return net;
}

Scenario small_scenario() {
  Scenario sc;
  sc.step = 3600.0;
  sc.horizon = 2;
  sc.availability["wind"] = {80e6, 60e6};
  sc.electricity_cost["wind"] = {2.5 / 3.6e9, 2.5 / 3.6e9};
  sc.demand["i2"] = {1.0, 2.0};
  sc.ns_penalty = 100.0;
  return sc;
}

}  // namespace

TEST_CASE("well-formed case validates clean") {
  auto report = validate(small_net(), small_scenario());
  CHECK(report.ok());
  CHECK(report.summary().empty());
  // validation does not mutate its inputs: run twice, same answer
  CHECK(validate(small_net(), small_scenario()).ok());
}

TEST_CASE("broken references and invariants each produce a named error") {
  auto sc = small_scenario();

  auto net = small_net();
  net.pipelines[0].to = "i99";
  auto r1 = validate(net, sc);
  REQUIRE(!r1.ok());
  CHECK(r1.summary().find("p1") != std::string::npos);
  CHECK(r1.errors.size() == 1);

  net = small_net();
  net.compressors[0].ratio = 0.9;
  auto r2 = validate(net, sc);
  REQUIRE(r2.errors.size() == 1);
  CHECK(r2.summary().find("c1") != std::string::npos);

  net = small_net();
  net.nodes.push_back({"i1", 4e6, 7e6, false});
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.nodes[0].pressure_min = 8e6;  // min above max
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.pipelines[0].catalog[1].diameter = 0.4;  // not increasing
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.pipelines[0].catalog[1].invest_cost = 5e4;  // cheaper than smaller pipe
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.pipelines[0].catalog.clear();
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.electrolyzers[0].efficiency = 0.0;
  CHECK(!validate(net, sc).ok());

  net = small_net();
  net.electrolyzers[0].availability_series = "absent";
  auto r3 = validate(net, sc);
  CHECK(r3.summary().find("absent") != std::string::npos);
}

TEST_CASE("scenario series length and value checks") {
  auto net = small_net();

  auto sc = small_scenario();
  sc.availability["wind"] = {80e6};  // horizon is 2
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.demand["i2"][1] = -1.0;
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.demand["i2"][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.demand["i9"] = {1.0, 1.0};  // unknown node
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.availability["wind"] = {80e6, 120e6};  // above unit capacity
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.ns_penalty = 0.0;
  CHECK(!validate(net, sc).ok());

  sc = small_scenario();
  sc.horizon = 0;
  CHECK(!validate(net, sc).ok());
}

TEST_CASE("scenario arithmetic") {
  auto sc = small_scenario();
  // 2 hourly steps stand in for the year: weight 8760/2
  CHECK(sc.annualization_weight() == doctest::Approx(8760.0 / 2.0));
  CHECK(sc.demand_at("i2", 0) == 1.0);
  CHECK(sc.demand_at("i2", 1) == 2.0);
  CHECK(sc.demand_at("i1", 0) == 0.0);  // absent node reads as zero
  // (1+2) kg/s * 3600 s, annualized
  CHECK(sc.annual_demand() ==
        doctest::Approx(sc.annualization_weight() * 3.0 * 3600.0));

  Scenario day;
  day.step = 3600.0;
  day.horizon = 24;
  CHECK(day.annualization_weight() == doctest::Approx(365.0));
}

TEST_CASE("demand scaling preserves shape") {
  auto sc = small_scenario();
  auto scaled = scale_demand(sc, 2.5);
  CHECK(scaled.demand["i2"][0] == doctest::Approx(2.5));
  CHECK(scaled.demand["i2"][1] == doctest::Approx(5.0));
  CHECK(scaled.annual_demand() == doctest::Approx(2.5 * sc.annual_demand()));
  // untouched fields carry over
  CHECK(scaled.ns_penalty == sc.ns_penalty);
  CHECK(scaled.availability["wind"][0] == sc.availability["wind"][0]);
  CHECK(scale_demand(sc, 0.0).annual_demand() == 0.0);
  CHECK_THROWS_AS(scale_demand(sc, -1.0), std::invalid_argument);
}

TEST_CASE("node lookup and pipeline pressure envelope") {
  auto net = small_net();
  CHECK(net.node_index("i1") == 0);
  CHECK(net.node_index("i3") == 2);
  CHECK(net.node_index("i9") == -1);
  CHECK(net.find_node("i2") != nullptr);
  CHECK(net.find_node("i2")->has_demand);
  CHECK(net.find_node("nope") == nullptr);

  auto [lo, hi] = pipeline_pressure_bounds(net, net.pipelines[0]);
  CHECK(lo == 4e6);
  CHECK(hi == 7e6);

  // explicit pipe-level envelope wins over the endpoint default
  net.pipelines[0].pressure_min = 4.5e6;
  net.pipelines[0].pressure_max = 6.5e6;
  auto [lo2, hi2] = pipeline_pressure_bounds(net, net.pipelines[0]);
  CHECK(lo2 == 4.5e6);
  CHECK(hi2 == 6.5e6);

  // endpoint default spans the widest envelope of the two nodes
  net.pipelines[0].pressure_min.reset();
  net.pipelines[0].pressure_max.reset();
  net.nodes[0].pressure_min = 3e6;
  net.nodes[1].pressure_max = 8e6;
  auto [lo3, hi3] = pipeline_pressure_bounds(net, net.pipelines[0]);
  CHECK(lo3 == 3e6);
  CHECK(hi3 == 8e6);

  CandidatePipeline orphan;
  orphan.id = "px";
  orphan.from = "i1";
  orphan.to = "i9";
  CHECK_THROWS_AS(pipeline_pressure_bounds(net, orphan), std::invalid_argument);
}

TEST_CASE("enum string round trips") {
  for (auto m : {FlowModelChoice::Dynamic, FlowModelChoice::SteadyState,
                 FlowModelChoice::Transport, FlowModelChoice::TransportLinepack})
    CHECK(flow_model_from_string(to_string(m)) == m);
  CHECK(to_string(FlowModelChoice::TransportLinepack) == "transport-linepack");
  CHECK_THROWS_AS(flow_model_from_string("weymouth"), std::invalid_argument);

  for (auto c : {CompressorControl::FixedRatio, CompressorControl::BoostRange})
    CHECK(compressor_control_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(compressor_control_from_string("off"), std::invalid_argument);
}
