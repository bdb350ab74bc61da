#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "h2plan/pipe_physics.hpp"
#include "h2plan/plan_eval.hpp"

using namespace h2plan;

namespace {

DiameterOption diam(double d, double cost) {
  return {d, physics::nikuradse_friction(d, physics::default_roughness), cost};
}

// 2-node toy sized so the small diameter barely carries the peak.
NetworkTopology toy_net() {
  NetworkTopology net;
  net.name = "toy";
  net.nodes = {{"i1", 4e6, 7e6, false}, {"i2", 4e6, 7e6, true}};
  CandidatePipeline p;
  p.id = "p1";
  p.from = "i1";
  p.to = "i2";
  p.length = 5e4;
  p.catalog = {diam(0.15, 1e5), diam(0.3, 4e5)};
  net.pipelines = {p};
  ElectrolyzerSite e;
  e.id = "e1";
  e.node = "i1";
  e.efficiency = 18.2 / 3.6e9;
  e.unit_capacity = 100e6;
  e.max_units = 4.0;
  e.invest_cost = 75e3;
  e.availability_series = "w";
  e.electricity_cost_series = "w";
  net.electrolyzers = {e};
  return net;
}

Scenario toy_scenario() {
  Scenario sc;
  sc.step = 3600.0;
  sc.horizon = 2;
  sc.availability["w"] = {90e6, 70e6};
  sc.electricity_cost["w"] = {2.5 / 3.6e9, 3.0 / 3.6e9};
  sc.demand["i2"] = {0.35, 0.55};
  sc.ns_penalty = 100.0;
  return sc;
}

}  // namespace

TEST_CASE("regret arithmetic and guards") {
  CHECK(regret(150.0, 100.0) == doctest::Approx(0.5));
  CHECK(regret(100.0, 100.0) == doctest::Approx(0.0));
  CHECK(regret(90.0, 100.0) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(regret(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(regret(1.0, -5.0), std::invalid_argument);
}

TEST_CASE("planning produces a full KPI decomposition") {
  PlanConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto sol = plan(toy_net(), toy_scenario(), cfg);
  REQUIRE(sol.status == MilpStatus::Optimal);
  REQUIRE(sol.has_plan);
  CHECK(sol.model == FlowModelChoice::Transport);

  // the decomposition must re-add to the solver objective
  CHECK(sol.kpi.total() ==
        doctest::Approx(sol.objective).epsilon(1e-9));
  // demand fits the small pipe, so nothing goes unserved
  CHECK(sol.kpi.non_supplied == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.kpi.penalty_cost == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.kpi.pipeline_invest == doctest::Approx(1e5));
  CHECK(sol.kpi.electrolyzer_invest > 0.0);
  CHECK(sol.kpi.operating_cost > 0.0);
  CHECK(sol.plan.diameter_choice.at("p1") == 0);
  CHECK(sol.kpi.linepack_swing.at("p1") == 0.0);  // no storage state
  CHECK(sol.conservation.balance_residual <= 1e-6);
  CHECK(sol.conservation.cycle_residual <= 1e-6);
}

TEST_CASE("zero demand plans to zero cost beyond the mandatory pipe") {
  auto sc = toy_scenario();
  sc.demand.clear();
  PlanConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto sol = plan(toy_net(), sc, cfg);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.kpi.non_supplied == 0.0);
  CHECK(sol.kpi.electrolyzer_invest == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.kpi.operating_cost == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(1e5).epsilon(1e-9));
}

TEST_CASE("demand beyond pipe capacity shows up as annualized shortfall") {
  auto net = toy_net();
  net.pipelines[0].catalog = {diam(0.15, 1e5)};  // only the small pipe
  net.electrolyzers[0].max_units = 40.0;
  auto sc = toy_scenario();
  sc.demand["i2"] = {2.0, 2.0};  // far above the ~1.2 kg/s ceiling
  PlanConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto sol = plan(net, sc, cfg);
  REQUIRE(sol.status == MilpStatus::Optimal);

  auto [plo, phi] = pipeline_pressure_bounds(net, net.pipelines[0]);
  double cap = physics::compute_coefficients(net.pipelines[0],
                                             net.pipelines[0].catalog[0], plo,
                                             phi, net.sound_speed)
                   .max_flow;
  double wfac = sc.annualization_weight() * sc.step;
  CHECK(sol.kpi.non_supplied ==
        doctest::Approx(wfac * 2.0 * (2.0 - cap)).epsilon(1e-6));
  CHECK(sol.kpi.penalty_cost ==
        doctest::Approx(sc.ns_penalty * sol.kpi.non_supplied).epsilon(1e-9));
}

TEST_CASE("self-validation of a dynamic plan has vanishing regret") {
  PlanConfig cfg;
  cfg.model = FlowModelChoice::Dynamic;
  cfg.pwl_segments = 3;
  auto sol = plan(toy_net(), toy_scenario(), cfg);
  REQUIRE(sol.status == MilpStatus::Optimal);
  REQUIRE(sol.has_plan);

  TruthConfig tc;
  tc.pwl_segments = 3;  // same standard the plan was made under
  auto val = validate_under_dynamic(sol.plan, toy_net(), toy_scenario(), tc);
  REQUIRE(val.status == MilpStatus::Optimal);
  CHECK(val.plan.diameter_choice.at("p1") ==
        sol.plan.diameter_choice.at("p1"));
  double r = regret(val.objective, sol.objective);
  CHECK(r <= 2.0 * cfg.gap);
  CHECK(r >= -2.0 * cfg.gap);
  CHECK(val.kpi.total() == doctest::Approx(val.objective).epsilon(1e-9));
  CHECK(val.conservation.balance_residual <= 1e-6);
  CHECK(val.conservation.cycle_residual <= 1e-6);
  // the dynamic model stores gas in the pipe, so the swing is defined
  CHECK(val.kpi.linepack_swing.count("p1") == 1);
}

TEST_CASE("undersized plan validated under the dynamic standard goes short") {
  auto net = toy_net();
  net.electrolyzers[0].max_units = 40.0;
  auto sc = toy_scenario();
  sc.demand["i2"] = {2.0, 2.0};  // needs the big pipe
  InvestmentPlan small;
  small.diameter_choice = {{"p1", 0}};
  small.electrolyzer_units = {{"e1", 20.0}};
  TruthConfig tc;
  tc.pwl_segments = 3;
  auto val = validate_under_dynamic(small, net, sc, tc);
  REQUIRE(val.status == MilpStatus::Optimal);
  CHECK(val.kpi.non_supplied > 0.0);
}

TEST_CASE("demand sweep fills its grid and anchors regret at the dynamic row") {
  auto net = toy_net();
  auto sc = toy_scenario();
  SweepConfig cfg;
  cfg.planning_segments = 2;
  cfg.truth_segments = 3;
  std::vector<double> levels = {0.5 * sc.annual_demand(), sc.annual_demand()};
  std::vector<FlowModelChoice> models = {FlowModelChoice::Transport,
                                         FlowModelChoice::Dynamic};
  auto rep = demand_sweep(net, sc, levels, models, cfg);
  REQUIRE(rep.cells.size() == 4);

  for (const auto& cell : rep.cells) {
    INFO(to_string(cell.model), " @ ", cell.demand_level);
    CHECK(cell.ok);
    CHECK(cell.error.empty());
    CHECK(std::isfinite(cell.regret));
    // no plan may beat the free dynamic optimum of its level
    CHECK(cell.regret >= -2.0 * cfg.gap);
    CHECK(cell.planning.kpi.total() ==
          doctest::Approx(cell.planning.objective).epsilon(1e-9));
  }
  for (double level : levels) {
    const SweepCell* dyn = rep.cell(level, FlowModelChoice::Dynamic);
    REQUIRE(dyn != nullptr);
    CHECK(std::fabs(dyn->regret) <= 2.0 * cfg.gap);
    // dynamic planning runs at truth resolution by construction
    CHECK(dyn->planning.segments == cfg.truth_segments);
    const SweepCell* tr = rep.cell(level, FlowModelChoice::Transport);
    REQUIRE(tr != nullptr);
    CHECK(tr->planning.segments == cfg.planning_segments);
  }
  CHECK(rep.cell(123.0, FlowModelChoice::Transport) == nullptr);
}

TEST_CASE("sweep without the dynamic model still gets a denominator") {
  auto net = toy_net();
  auto sc = toy_scenario();
  SweepConfig cfg;
  cfg.planning_segments = 2;
  cfg.truth_segments = 3;
  std::vector<double> levels = {sc.annual_demand()};
  auto rep = demand_sweep(net, sc, levels, {FlowModelChoice::Transport}, cfg);
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].ok);
  CHECK(std::isfinite(rep.cells[0].regret));
  CHECK(rep.cells[0].regret >= -2.0 * cfg.gap);
}

TEST_CASE("sweep input guards") {
  auto net = toy_net();
  auto sc = toy_scenario();
  SweepConfig cfg;
  CHECK_THROWS_AS(demand_sweep(net, sc, {}, {FlowModelChoice::Transport}, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(demand_sweep(net, sc, {1e6}, {}, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      demand_sweep(net, sc, {-1e6}, {FlowModelChoice::Transport}, cfg),
      std::invalid_argument);
  auto empty = sc;
  empty.demand.clear();
  CHECK_THROWS_AS(
      demand_sweep(net, empty, {1e6}, {FlowModelChoice::Transport}, cfg),
      std::invalid_argument);
}

TEST_CASE("linepack model reports a positive swing under pulsed demand") {
  auto net = toy_net();
  auto sc = toy_scenario();
  sc.horizon = 4;
  sc.availability["w"] = {90e6, 90e6, 90e6, 90e6};
  sc.electricity_cost["w"] = {2.5 / 3.6e9, 2.5 / 3.6e9, 2.5 / 3.6e9,
                              2.5 / 3.6e9};
  // the pulse exceeds the small pipe's steady ceiling, so serving it needs
  // gas parked in the pipe beforehand
  sc.demand["i2"] = {0.2, 1.6, 0.2, 0.2};
  PlanConfig cfg;
  cfg.model = FlowModelChoice::TransportLinepack;
  auto sol = plan(net, sc, cfg);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.kpi.total() == doctest::Approx(sol.objective).epsilon(1e-9));
  CHECK(sol.conservation.cycle_residual <= 1e-6);
  if (sol.plan.diameter_choice.at("p1") == 0 && sol.kpi.non_supplied == 0.0)
    CHECK(sol.kpi.linepack_swing.at("p1") > 0.0);
}
