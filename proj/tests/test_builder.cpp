#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "h2plan/branch_and_bound.hpp"
#include "h2plan/hep_builder.hpp"
#include "h2plan/pipe_physics.hpp"
#include "h2plan/validation.hpp"

using namespace h2plan;

namespace {

DiameterOption diam(double d, double cost) {
  return {d, physics::nikuradse_friction(d, physics::default_roughness), cost};
}

// Two producer-ish nodes, one junction, two pipes with different catalog
// sizes, one compressor of each control mode, one electrolyzer. Exercises
// every column/row family at once.
NetworkTopology audit_net() {
  NetworkTopology net;
  net.name = "audit";
  net.nodes = {{"i1", 4e6, 7e6, false},
               {"i2", 4e6, 7e6, true},
               {"i3", 4e6, 7e6, true},
               {"i4", 4e6, 7e6, false}};
  CandidatePipeline p1;
  p1.id = "p1";
  p1.from = "i1";
  p1.to = "i2";
  p1.length = 5e4;
  p1.catalog = {diam(0.15, 1e5), diam(0.3, 3e5)};
  CandidatePipeline p2;
  p2.id = "p2";
  p2.from = "i2";
  p2.to = "i3";
  p2.length = 4e4;
  p2.catalog = {diam(0.15, 9e4), diam(0.25, 2e5), diam(0.4, 5e5)};
  net.pipelines = {p1, p2};
  net.compressors = {{"c1", "i3", "i4", 1.4, CompressorControl::FixedRatio},
                     {"c2", "i4", "i1", 1.2, CompressorControl::BoostRange}};
  ElectrolyzerSite e;
  e.id = "e1";
  e.node = "i1";
  e.efficiency = 18.2 / 3.6e9;
  e.unit_capacity = 100e6;
  e.max_units = 8.0;
  e.invest_cost = 75e3;
  e.availability_series = "wind";
  e.electricity_cost_series = "wind";
  net.electrolyzers = {e};
  return net;
}

Scenario audit_scenario(int T) {
  Scenario sc;
  sc.step = 3600.0;
  sc.horizon = T;
  sc.availability["wind"].assign(T, 80e6);
  sc.electricity_cost["wind"].assign(T, 2.5 / 3.6e9);
  sc.demand["i2"].assign(T, 0.3);
  sc.demand["i3"].assign(T, 0.2);
  sc.ns_penalty = 100.0;
  return sc;
}

// Closed-form family counts implied by the model structure, computed from the
// case data alone so a builder change that shifts any family gets caught.
struct ExpectedCounts {
  std::map<std::string, int> cols, rows;
};

ExpectedCounts expected_counts(const NetworkTopology& net, const Scenario& sc,
                               const BuildConfig& cfg) {
  const int T = sc.horizon;
  const int NN = static_cast<int>(net.nodes.size());
  const int NP = static_cast<int>(net.pipelines.size());
  const int NC = static_cast<int>(net.compressors.size());
  const int NE = static_cast<int>(net.electrolyzers.size());
  const int K = cfg.pwl_segments;
  const int nb = cfg.allow_no_build ? 1 : 0;
  int sumcat = 0;
  for (const auto& p : net.pipelines) sumcat += static_cast<int>(p.catalog.size());
  int nfix = 0, nboost = 0;
  for (const auto& c : net.compressors)
    (c.control == CompressorControl::FixedRatio ? nfix : nboost)++;

  std::set<std::string> demand_nodes, balance_nodes;
  for (const auto& [node, series] : sc.demand)
    for (double v : series)
      if (v > 0.0) { demand_nodes.insert(node); break; }
  for (const auto& e : net.electrolyzers) balance_nodes.insert(e.node);
  for (const auto& p : net.pipelines) {
    balance_nodes.insert(p.from);
    balance_nodes.insert(p.to);
  }
  for (const auto& c : net.compressors) {
    balance_nodes.insert(c.from);
    balance_nodes.insert(c.to);
  }
  for (const auto& n : demand_nodes) balance_nodes.insert(n);
  const int Dn = static_cast<int>(demand_nodes.size());
  const int Bn = static_cast<int>(balance_nodes.size());

  ExpectedCounts ex;
  auto& cols = ex.cols;
  auto& rows = ex.rows;
  cols["build"] = sumcat + NP * nb;
  cols["units"] = NE;
  cols["prod"] = NE * T;
  if (Dn) cols["nonsup"] = Dn * T;
  cols["flow_in"] = NP * T;
  cols["flow_out"] = NP * T;
  if (NC) {
    cols["cflow_in"] = NC * T;
    cols["cflow_out"] = NC * T;
  }
  rows["choose"] = NP;
  rows["prod_cap"] = NE * T;
  rows["balance"] = Bn * T;
  if (NC) rows["comp_bal"] = NC * T;

  auto pwl_family = [&](const std::string& base, int terms) {
    cols["pwl_d::" + base] = terms * K;
    cols["pwl_z::" + base] = terms * (K - 1);
    rows["pwl_x::" + base] = terms;
    rows["pwl_y::" + base] = terms;
    rows["pwl_fill::" + base] = terms * (K - 1);
    rows["pwl_next::" + base] = terms * (K - 1);
  };

  switch (cfg.model) {
    case FlowModelChoice::Dynamic:
      cols["flow_avg"] = NP * T;
      cols["fric"] = NP * T;
      cols["press"] = NN * T;
      cols["press_sqr"] = NN * T;
      pwl_family("press", NN * T);
      pwl_family("flow_avg", NP * T);
      rows["def_avg"] = NP * T;
      rows["cycle"] = NP;
      rows["mom_up"] = sumcat * T;
      rows["mom_lo"] = sumcat * T;
      rows["mass_up"] = sumcat * T;
      rows["mass_lo"] = sumcat * T;
      if (nb) {
        rows["absent_in_up"] = NP * T;
        rows["absent_in_lo"] = NP * T;
        rows["absent_out_up"] = NP * T;
        rows["absent_out_lo"] = NP * T;
      }
      if (nfix) rows["comp_fix"] = nfix * T;
      if (nboost) {
        rows["comp_lo"] = nboost * T;
        rows["comp_hi"] = nboost * T;
      }
      break;
    case FlowModelChoice::SteadyState:
      cols["flow"] = NP * T;
      cols["fric"] = NP * T;
      cols["press_sqr"] = NN * T;
      pwl_family("flow", NP * T);
      rows["eq_in"] = NP * T;
      rows["eq_out"] = NP * T;
      rows["mom_up"] = sumcat * T;
      rows["mom_lo"] = sumcat * T;
      if (nb) {
        rows["absent_up"] = NP * T;
        rows["absent_lo"] = NP * T;
      }
      if (nfix) rows["comp_fix"] = nfix * T;
      if (nboost) {
        rows["comp_lo"] = nboost * T;
        rows["comp_hi"] = nboost * T;
      }
      break;
    case FlowModelChoice::Transport:
    case FlowModelChoice::TransportLinepack:
      rows["cap_in_up"] = NP * T;
      rows["cap_in_lo"] = NP * T;
      rows["cap_out_up"] = NP * T;
      rows["cap_out_lo"] = NP * T;
      if (cfg.model == FlowModelChoice::TransportLinepack) {
        cols["pack"] = NP * T;
        rows["pack_link"] = NP * T;
        rows["pack_lo"] = NP * T;
        rows["pack_hi"] = NP * T;
      } else {
        rows["eq_io"] = NP * T;
      }
      break;
  }
  return ex;
}

double row_value(const Row& r, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& e : r.entries) v += e.coef * x[e.col];
  return v;
}

bool row_holds(const Row& r, const std::vector<double>& x, double tol) {
  double v = row_value(r, x);
  switch (r.sense) {
    case RowSense::LE: return v <= r.rhs + tol;
    case RowSense::GE: return v >= r.rhs - tol;
    case RowSense::EQ: return std::fabs(v - r.rhs) <= tol;
  }
  return false;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("structural audit: every family count matches its closed form") {
  auto net = audit_net();
  auto sc = audit_scenario(3);
  for (auto model : {FlowModelChoice::Dynamic, FlowModelChoice::SteadyState,
                     FlowModelChoice::Transport,
                     FlowModelChoice::TransportLinepack}) {
    for (bool nb : {false, true}) {
      BuildConfig cfg;
      cfg.model = model;
      cfg.pwl_segments = 4;
      cfg.allow_no_build = nb;
      auto inst = build_hep(net, sc, cfg);
      auto ex = expected_counts(net, sc, cfg);
      CHECK(inst.column_family_counts() == ex.cols);
      CHECK(inst.row_family_counts() == ex.rows);
      CHECK(inst.model == model);
      CHECK(inst.pwl_segments == 4);
      CHECK(static_cast<int>(inst.choice_groups().size()) ==
            static_cast<int>(net.pipelines.size()));
    }
  }
}

TEST_CASE("tiny transport instance matches the hand enumeration") {
  NetworkTopology net;
  net.nodes = {{"i1", 4e6, 7e6, false}, {"i2", 4e6, 7e6, true}};
  CandidatePipeline p;
  p.id = "p1";
  p.from = "i1";
  p.to = "i2";
  p.length = 6e4;
  p.catalog = {diam(0.9, 2e5)};
  net.pipelines = {p};
  ElectrolyzerSite e;
  e.id = "e1";
  e.node = "i1";
  e.efficiency = 18.2 / 3.6e9;
  e.unit_capacity = 100e6;
  e.max_units = 10.0;
  e.invest_cost = 75e3;
  e.availability_series = "w";
  e.electricity_cost_series = "w";
  net.electrolyzers = {e};
  Scenario sc;
  sc.step = 3600.0;
  sc.horizon = 2;
  sc.availability["w"] = {80e6, 60e6};
  sc.electricity_cost["w"] = {2.5 / 3.6e9, 2.5 / 3.6e9};
  sc.demand["i2"] = {1.0, 2.0};
  sc.ns_penalty = 100.0;

  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);
  // columns: 1 build + 1 units + 2 prod + 2 nonsup + 2 flow_in + 2 flow_out
  CHECK(inst.n_cols() == 10);
  // rows: 1 choose + 2 prod_cap + 4 balance + 8 capacity + 2 eq_io
  CHECK(inst.n_rows() == 17);

  // the one binary is forced to 1, so the MILP is a plain LP whose optimum
  // has a closed form: serve all demand (penalty dwarfs production cost),
  // size the site for the tightest availability step
  auto sol = solve_milp(inst);
  REQUIRE(sol.status == MilpStatus::Optimal);
  double eff = e.efficiency;
  double units_needed =
      std::max(1.0 / (eff * 80e6), 2.0 / (eff * 60e6));
  double wfac = sc.annualization_weight() * sc.step;
  double expect = 2e5 + 75e3 * units_needed +
                  wfac * (2.5 / 3.6e9) / eff * (1.0 + 2.0);
  CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-8));

  auto plan = extract_investments(inst, net, sol.x);
  CHECK(plan.diameter_choice.at("p1") == 0);
  CHECK(plan.electrolyzer_units.at("e1") ==
        doctest::Approx(units_needed).epsilon(1e-6));
}

TEST_CASE("builder rejects bad inputs") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  BuildConfig cfg;
  cfg.pwl_segments = 1;
  CHECK_THROWS_AS(build_hep(net, sc, cfg), std::invalid_argument);
  cfg.pwl_segments = 8;
  net.compressors[0].ratio = 0.5;
  CHECK_THROWS_AS(build_hep(net, sc, cfg), std::invalid_argument);
}

TEST_CASE("pressure columns and their interpolation terms use scaled units") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Dynamic;
  cfg.pwl_segments = 2;
  auto inst = build_hep(net, sc, cfg);

  int pc = inst.require_column(tags::press("i1", 0));
  CHECK(inst.col(pc).lb == doctest::Approx(4e6 / kPressureScale));
  CHECK(inst.col(pc).ub == doctest::Approx(7e6 / kPressureScale));
  int ps = inst.require_column(tags::press_sqr("i1", 0));
  CHECK(inst.col(ps).lb == doctest::Approx(1600.0));
  CHECK(inst.col(ps).ub == doctest::Approx(4900.0));

  bool found = false;
  for (const auto& term : inst.pwl_terms()) {
    if (term.tag != tags::press("i1", 0)) continue;
    found = true;
    REQUIRE(term.breaks.size() == 3);
    CHECK(term.breaks[0] == doctest::Approx(40.0));
    CHECK(term.breaks[1] == doctest::Approx(55.0));
    CHECK(term.breaks[2] == doctest::Approx(70.0));
    CHECK(term.values[1] == doctest::Approx(3025.0));
    CHECK(term.max_error == doctest::Approx(15.0 * 15.0 / 4.0));
  }
  CHECK(found);

  // the whole point of the scaling: coefficient magnitudes stay within a
  // range a double-precision LP can actually bridge
  double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
  for (int i = 0; i < inst.n_rows(); ++i)
    for (const auto& e : inst.row(i).entries) {
      double a = std::fabs(e.coef);
      if (a == 0.0) continue;
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
  CHECK(amax / amin < 1e8);
}

TEST_CASE("deactivated disjunctive rows are slack for any in-bounds point") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  std::mt19937 rng(8472);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto model : {FlowModelChoice::Dynamic, FlowModelChoice::SteadyState}) {
    BuildConfig cfg;
    cfg.model = model;
    cfg.pwl_segments = 4;
    cfg.allow_no_build = true;
    auto inst = build_hep(net, sc, cfg);

    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(inst.n_cols());
      for (int j = 0; j < inst.n_cols(); ++j) {
        const auto& c = inst.col(j);
        x[j] = starts_with(c.tag, "build")
                   ? 0.0
                   : c.lb + u(rng) * (c.ub - c.lb);
      }
      for (int i = 0; i < inst.n_rows(); ++i) {
        const Row& r = inst.row(i);
        if (!(starts_with(r.tag, "mom_") || starts_with(r.tag, "mass_") ||
              starts_with(r.tag, "absent_")))
          continue;
        CHECK(row_holds(r, x, 1e-9 * std::max(1.0, std::fabs(r.rhs))));
      }
    }
  }
}

TEST_CASE("activated momentum and mass rows reduce to the physical relations") {
  auto net = audit_net();
  auto sc = audit_scenario(3);
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Dynamic;
  cfg.pwl_segments = 4;
  auto inst = build_hep(net, sc, cfg);
  const double kP = kPressureScale;
  const double dt = sc.step;
  std::mt19937 rng(1917);
  std::uniform_real_distribution<double> press(4e6, 7e6);

  for (const auto& p : net.pipelines) {
    auto [plo, phi] = pipeline_pressure_bounds(net, p);
    int ia = net.node_index(p.from);
    int ja = net.node_index(p.to);
    const auto& ni = net.nodes[ia].id;
    const auto& nj = net.nodes[ja].id;
    for (int d = 0; d < static_cast<int>(p.catalog.size()); ++d) {
      auto co = physics::compute_coefficients(p, p.catalog[d], plo, phi,
                                              net.sound_speed);
      for (int t = 0; t < sc.horizon; ++t) {
        int prev = (t + sc.horizon - 1) % sc.horizon;
        char sfx[64];
        std::snprintf(sfx, sizeof(sfx), "[a=%s,d=%02d,t=%03d]", p.id.c_str(),
                      d, t);
        std::vector<double> x(inst.n_cols(), 0.0);
        int b = inst.require_column(tags::build(p.id, d));
        x[b] = 1.0;

        // steady pair (p_i, p_j) with the exactly implied friction value
        double pi = press(rng), pj = press(rng);
        double f = physics::steady_flow(pi, pj, co.resistance);
        x[inst.require_column(tags::press_sqr(ni, t))] = pi * pi / (kP * kP);
        x[inst.require_column(tags::press_sqr(nj, t))] = pj * pj / (kP * kP);
        x[inst.require_column(tags::fric(p.id, t))] = f * std::fabs(f);
        const double tol = 1e-9 * phi * phi / (kP * kP);
        for (int i = 0; i < inst.n_rows(); ++i) {
          const Row& r = inst.row(i);
          if (r.tag == std::string("mom_up") + sfx ||
              r.tag == std::string("mom_lo") + sfx) {
            CHECK(row_holds(r, x, tol));
            // and the inequality is tight: the pair pins the relation
            CHECK(std::fabs(row_value(r, x) - r.rhs) <= tol);
          }
        }

        // pressure path plus the boundary-flow difference it implies
        double pit = press(rng), pjt = press(rng);
        double pip = press(rng), pjp = press(rng);
        x[inst.require_column(tags::press(ni, t))] = pit / kP;
        x[inst.require_column(tags::press(nj, t))] = pjt / kP;
        x[inst.require_column(tags::press(ni, prev))] = pip / kP;
        x[inst.require_column(tags::press(nj, prev))] = pjp / kP;
        double dflow = (pit + pjt - pip - pjp) / (dt * co.linepack_coeff);
        x[inst.require_column(tags::flow_in(p.id, t))] = dflow / 2.0;
        x[inst.require_column(tags::flow_out(p.id, t))] = -dflow / 2.0;
        for (int i = 0; i < inst.n_rows(); ++i) {
          const Row& r = inst.row(i);
          if (r.tag == std::string("mass_up") + sfx ||
              r.tag == std::string("mass_lo") + sfx) {
            CHECK(row_holds(r, x, 1e-9));
            CHECK(std::fabs(row_value(r, x) - r.rhs) <= 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("fixing investments pins bounds and unfixing restores them") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);

  std::map<std::string, std::pair<double, double>> before;
  for (int j = 0; j < inst.n_cols(); ++j)
    before[inst.col(j).tag] = {inst.col(j).lb, inst.col(j).ub};

  InvestmentPlan plan;
  plan.diameter_choice = {{"p1", 1}, {"p2", 0}};
  plan.electrolyzer_units = {{"e1", 3.5}};
  fix_investments(inst, net, plan);

  CHECK(inst.col(inst.require_column(tags::build("p1", 1))).lb == 1.0);
  CHECK(inst.col(inst.require_column(tags::build("p1", 0))).ub == 0.0);
  CHECK(inst.col(inst.require_column(tags::build("p2", 0))).lb == 1.0);
  CHECK(inst.col(inst.require_column(tags::units("e1"))).lb == 3.5);
  CHECK(inst.col(inst.require_column(tags::units("e1"))).ub == 3.5);

  // re-fixing to another plan and then unfixing still restores the original
  InvestmentPlan plan2;
  plan2.diameter_choice = {{"p1", 0}, {"p2", 2}};
  plan2.electrolyzer_units = {{"e1", 0.0}};
  fix_investments(inst, net, plan2);
  unfix_investments(inst);
  for (int j = 0; j < inst.n_cols(); ++j) {
    CHECK(inst.col(j).lb == before[inst.col(j).tag].first);
    CHECK(inst.col(j).ub == before[inst.col(j).tag].second);
  }
  CHECK(inst.pinned_bounds.empty());

  InvestmentPlan missing;
  missing.diameter_choice = {{"p1", 0}};  // p2 absent
  missing.electrolyzer_units = {{"e1", 1.0}};
  CHECK_THROWS_AS(fix_investments(inst, net, missing), std::invalid_argument);

  InvestmentPlan out_of_range;
  out_of_range.diameter_choice = {{"p1", 5}, {"p2", 0}};
  out_of_range.electrolyzer_units = {{"e1", 1.0}};
  CHECK_THROWS_AS(fix_investments(inst, net, out_of_range),
                  std::invalid_argument);

  InvestmentPlan no_build;
  no_build.diameter_choice = {{"p1", -1}, {"p2", 0}};
  no_build.electrolyzer_units = {{"e1", 1.0}};
  // instance was built without the pseudo diameter
  CHECK_THROWS_AS(fix_investments(inst, net, no_build), std::invalid_argument);

  InvestmentPlan too_many_units;
  too_many_units.diameter_choice = {{"p1", 0}, {"p2", 0}};
  too_many_units.electrolyzer_units = {{"e1", 100.0}};
  CHECK_THROWS_AS(fix_investments(inst, net, too_many_units),
                  std::invalid_argument);
}

TEST_CASE("restriction: fixing the optimal plan reproduces the optimum") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);
  auto free = solve_milp(inst);
  REQUIRE(free.status == MilpStatus::Optimal);
  auto plan = extract_investments(inst, net, free.x);

  fix_investments(inst, net, plan);
  auto fixed = solve_milp(inst);
  REQUIRE(fixed.status == MilpStatus::Optimal);
  CHECK(fixed.objective ==
        doctest::Approx(free.objective).epsilon(1e-6));

  // any other plan can only cost at least as much
  unfix_investments(inst);
  InvestmentPlan other = plan;
  other.diameter_choice["p2"] = (plan.diameter_choice["p2"] + 1) % 3;
  fix_investments(inst, net, other);
  auto worse = solve_milp(inst);
  REQUIRE(worse.status == MilpStatus::Optimal);
  CHECK(worse.objective >= free.objective - 1e-6 * std::fabs(free.objective));
}

TEST_CASE("undersized fixed plan shows up as non-supplied hydrogen") {
  NetworkTopology net;
  net.nodes = {{"i1", 4e6, 7e6, false}, {"i2", 4e6, 7e6, true}};
  CandidatePipeline p;
  p.id = "p1";
  p.from = "i1";
  p.to = "i2";
  p.length = 6e4;
  p.catalog = {diam(0.5, 1e5), diam(0.9, 3e5)};
  net.pipelines = {p};
  ElectrolyzerSite e;
  e.id = "e1";
  e.node = "i1";
  e.efficiency = 18.2 / 3.6e9;
  e.unit_capacity = 100e6;
  e.max_units = 100.0;
  e.invest_cost = 75e3;
  e.availability_series = "w";
  e.electricity_cost_series = "w";
  net.electrolyzers = {e};
  Scenario sc;
  sc.step = 3600.0;
  sc.horizon = 2;
  sc.availability["w"] = {100e6, 100e6};
  sc.electricity_cost["w"] = {2.5 / 3.6e9, 2.5 / 3.6e9};
  sc.demand["i2"] = {40.0, 40.0};  // above the 0.5 m capacity, below 0.9 m
  sc.ns_penalty = 100.0;

  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);

  auto [plo, phi] = pipeline_pressure_bounds(net, p);
  double cap_small =
      physics::compute_coefficients(p, p.catalog[0], plo, phi, 1320.0).max_flow;
  REQUIRE(cap_small < 40.0);

  InvestmentPlan small;
  small.diameter_choice = {{"p1", 0}};
  small.electrolyzer_units = {{"e1", 100.0}};  // ample: the pipe is the bottleneck
  fix_investments(inst, net, small);
  auto sol = solve_milp(inst);
  REQUIRE(sol.status == MilpStatus::Optimal);
  double ns = 0.0;
  for (int t = 0; t < 2; ++t)
    ns += sol.x[inst.require_column(tags::nonsup("i2", t))];
  CHECK(ns == doctest::Approx(2.0 * (40.0 - cap_small)).epsilon(1e-6));
}

TEST_CASE("zero demand leaves only the mandatory diameter cost") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  sc.demand.clear();
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);
  auto sol = solve_milp(inst);
  REQUIRE(sol.status == MilpStatus::Optimal);
  // cheapest catalog entry of each pipeline; nothing else is worth money
  CHECK(sol.objective == doctest::Approx(1e5 + 9e4).epsilon(1e-9));

  cfg.allow_no_build = true;
  auto inst2 = build_hep(net, sc, cfg);
  auto sol2 = solve_milp(inst2);
  REQUIRE(sol2.status == MilpStatus::Optimal);
  CHECK(sol2.objective == doctest::Approx(0.0).epsilon(1e-12));
  auto plan = extract_investments(inst2, net, sol2.x);
  CHECK(plan.diameter_choice.at("p1") == -1);
  CHECK(plan.diameter_choice.at("p2") == -1);
}

TEST_CASE("investment extraction rejects inconsistent selections") {
  auto net = audit_net();
  auto sc = audit_scenario(2);
  BuildConfig cfg;
  cfg.model = FlowModelChoice::Transport;
  auto inst = build_hep(net, sc, cfg);
  std::vector<double> x(inst.n_cols(), 0.0);
  CHECK_THROWS_AS(extract_investments(inst, net, x), std::runtime_error);
  x[inst.require_column(tags::build("p1", 0))] = 1.0;
  x[inst.require_column(tags::build("p1", 1))] = 1.0;
  x[inst.require_column(tags::build("p2", 0))] = 1.0;
  CHECK_THROWS_AS(extract_investments(inst, net, x), std::runtime_error);
}
