#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "h2plan/branch_and_bound.hpp"
#include "h2plan/hep_builder.hpp"
#include "h2plan/network.hpp"
#include "h2plan/scenario.hpp"

namespace h2plan {

// Cost and service breakdown of one solved instance, all annualized.
struct KpiRow {
  double electrolyzer_invest = 0.0;  // EUR/year
  double pipeline_invest = 0.0;      // EUR/year
  double operating_cost = 0.0;       // EUR/year, electricity
  double penalty_cost = 0.0;         // EUR/year, non-supply charges
  double non_supplied = 0.0;         // kg/year
  // pipeline id -> max minus min stored gas mass over the horizon [kg];
  // zero for models without a storage state
  std::map<std::string, double> linepack_swing;

  double total() const {
    return electrolyzer_invest + pipeline_invest + operating_cost + penalty_cost;
  }
};

// Mass-conservation diagnostics of a solution vector.
struct ConservationCheck {
  double balance_residual = 0.0;  // max nodal balance violation [kg/s]
  double cycle_residual = 0.0;    // max per-pipe net accumulation [kg]
};

KpiRow compute_kpis(const MilpInstance& inst, const NetworkTopology& net,
                    const Scenario& sc, const std::vector<double>& x);
ConservationCheck check_conservation(const MilpInstance& inst,
                                     const NetworkTopology& net,
                                     const Scenario& sc,
                                     const std::vector<double>& x);

struct PlanConfig {
  FlowModelChoice model = FlowModelChoice::Transport;
  int pwl_segments = 8;
  bool allow_no_build = false;
  double gap = 1e-6;
  long node_limit = 0;
  double time_limit = 0.0;  // wall seconds per solve, 0 = unlimited
  std::function<void(const std::string&)> log;
};

// Dynamic-model settings used as the evaluation standard. Finer grid than
// planning so the standard is declared once and shared by every caller.
struct TruthConfig {
  int pwl_segments = 32;
  bool allow_no_build = false;
  double gap = 1e-6;
  long node_limit = 0;
  double time_limit = 0.0;
};

struct PlanSolution {
  FlowModelChoice model = FlowModelChoice::Transport;
  int segments = 0;
  MilpStatus status = MilpStatus::Numerical;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  bool has_plan = false;
  InvestmentPlan plan;
  KpiRow kpi;
  ConservationCheck conservation;
};

// Build and solve one expansion-planning instance, then pull the investment
// plan, KPI decomposition and conservation diagnostics out of the incumbent.
PlanSolution plan(const NetworkTopology& net, const Scenario& sc,
                  const PlanConfig& cfg);

// Operate a fixed investment plan under the dynamic model at truth
// resolution. Non-supply recourse keeps the fixed instance feasible for any
// plan, so the returned objective is the plan's true annual cost.
PlanSolution validate_under_dynamic(const InvestmentPlan& inv,
                                    const NetworkTopology& net,
                                    const Scenario& sc, const TruthConfig& tc);

// Relative excess cost of operating a simplified plan under the dynamic
// model: (cost_of_plan - dynamic_optimum) / dynamic_optimum. Throws
// std::invalid_argument when the denominator is not strictly positive.
double regret(double cost_of_plan, double dynamic_optimum);

struct SweepConfig {
  int planning_segments = 8;
  int truth_segments = 32;
  double gap = 1e-6;
  double time_limit = 0.0;  // per solve
  int threads = 1;          // > 1 parallelizes across sweep cells
  std::function<void(const std::string&)> log;
};

struct SweepCell {
  double demand_level = 0.0;  // annual demand [kg/year]
  FlowModelChoice model = FlowModelChoice::Transport;
  bool ok = false;
  std::string error;  // failure note when a solve threw or hit a limit
  PlanSolution planning;
  PlanSolution validation;  // the plan operated under the dynamic standard
  double regret = std::numeric_limits<double>::quiet_NaN();
};

struct SweepReport {
  std::vector<double> levels;
  std::vector<FlowModelChoice> models;
  std::vector<SweepCell> cells;  // levels outer, models inner

  const SweepCell* cell(double level, FlowModelChoice model) const;
};

// Scale the base scenario so annual demand hits each level (shape and nodal
// split preserved), plan under every model, validate each plan under the
// dynamic standard, and attach regrets. The dynamic cell is planned directly
// at truth resolution and doubles as the regret denominator for its level;
// when the model list omits it a hidden truth solve fills that role. Cell
// failures are recorded in place and the sweep continues.
SweepReport demand_sweep(const NetworkTopology& net, const Scenario& base,
                         const std::vector<double>& levels,
                         const std::vector<FlowModelChoice>& models,
                         const SweepConfig& cfg);

}  // namespace h2plan
