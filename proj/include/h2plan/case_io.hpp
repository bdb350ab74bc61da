#pragma once

#include <string>

#include "h2plan/hep_builder.hpp"
#include "h2plan/network.hpp"
#include "h2plan/plan_eval.hpp"
#include "h2plan/scenario.hpp"

namespace h2plan {

// A case bundle is a directory with three files:
//   manifest.json   step, horizon, penalty, and the names of the other files
//   topology.json   nodes, pipelines with diameter catalogs, compressors,
//                   electrolyzer sites
//   series.csv      one row per step; columns availability_mw:<key>,
//                   electricity_cost_eur_per_mwh:<key>, demand_t_per_h:<node>
// Field names carry their unit; values convert to SI exactly once on load and
// back exactly once on save. Saved numbers are rounded to 12 significant
// digits, so save -> load -> save reaches a byte-stable fixpoint.
struct Case {
  NetworkTopology network;
  Scenario scenario;
};

// Reads a bundle and returns validated core objects in SI units. Throws
// std::runtime_error naming the file (and where possible the field, row, or
// entity id) on parse errors, missing or mistyped fields, NaN values,
// negative demand or availability, series/topology mismatches, and
// validation failures.
Case load_case(const std::string& dir);

// Writes the bundle, creating the directory when missing.
void save_case(const Case& c, const std::string& dir);

// Default bundle directory: $H2PLAN_CASE_DIR when set and non-empty,
// otherwise "case".
std::string default_case_dir();

struct GenerateOptions {
  double annual_demand = 1.0e9;  // kg/year summed over all demand nodes
  // 0 spreads investment straight-line over the asset life; a positive rate
  // switches to the annuity factor r(1+r)^n / ((1+r)^n - 1).
  double interest_rate = 0.0;
  double asset_life_years = 40.0;
};

// Built-in 11-node study system: a wind-powered production region (i1) and a
// solar-powered one (i8) feeding three demand centers (i7, i10, i11) through
// 60 km pipeline corridors coupled by two boost compressors. 24 hourly
// steps: solar follows a midday bell, wind a diurnal profile with a deep
// night minimum, city-gate demand peaks in the evening, industrial demand is
// flat with a shallow night dip. Pipeline invest uses a synthetic quadratic
// cost-per-km curve; each catalog has 9 diameters from 0.5 to 1.4 m.
Case generate_reference_case(const GenerateOptions& opt = {});

// Investment plan persistence, plain JSON.
void save_plan(const InvestmentPlan& plan, const std::string& path);
InvestmentPlan load_plan(const std::string& path);

// Sweep results as CSV with a fixed column order, numbers at 12 significant
// digits, one row per cell. An empty report writes only the header. Loading
// restores every CSV-backed field, so a second save is byte-identical.
void save_sweep_csv(const SweepReport& rep, const std::string& path);
SweepReport load_sweep_csv(const std::string& path);

}  // namespace h2plan
