#pragma once

#include <map>
#include <string>
#include <vector>

#include "h2plan/milp.hpp"
#include "h2plan/network.hpp"
#include "h2plan/scenario.hpp"

namespace h2plan {

struct BuildConfig {
  FlowModelChoice model = FlowModelChoice::Transport;
  int pwl_segments = 8;         // K for every interpolated term
  bool allow_no_build = false;  // adds a zero-cost, zero-capacity pseudo diameter
  double compressor_flow_bound = 0.0;  // kg/s; <= 0 derives a safe finite bound
};

// Pressure columns are built in units of this many pascal (and squared
// pressure in its square). Raw pascal puts squared pressures near 5e13 and
// momentum activation constants near 2e15 in the same matrix as unit balance
// coefficients, which no floating-point LP tolerance can bridge; in these
// units the full coefficient range stays within about five orders of
// magnitude. Topology input and every reported result remain in pascal.
inline constexpr double kPressureScale = 1e5;

// Linepack state columns are stored in units of this many kilograms. A large
// pipe holds a few 1e5 kg, and raw kilograms put that scale on the diameter
// binaries in the storage-envelope rows next to unit balance coefficients;
// in these units the gap stays within about four orders of magnitude.
// Reported linepack quantities are always converted back to kilograms.
inline constexpr double kLinepackScale = 1e3;

struct InvestmentPlan {
  // pipeline id -> catalog index; -1 selects the pseudo "not built" option
  // (only valid against instances built with allow_no_build)
  std::map<std::string, int> diameter_choice;
  std::map<std::string, double> electrolyzer_units;
};

// Assemble the expansion-planning MILP: investment columns (diameter choice
// binaries, electrolyzer units), production and non-supply recourse, nodal
// balances, and the flow-model block selected by cfg.model. Throws
// std::invalid_argument when validate(net, scenario) reports errors or the
// config is out of range.
MilpInstance build_hep(const NetworkTopology& net, const Scenario& scenario,
                       const BuildConfig& cfg);

// Pin investment columns to `plan` (bounds become equalities). Original
// bounds land in inst.pinned_bounds so unfix_investments can restore them.
// Throws when the plan does not cover the topology or picks an invalid index.
void fix_investments(MilpInstance& inst, const NetworkTopology& net,
                     const InvestmentPlan& plan);
void unfix_investments(MilpInstance& inst);

// Read the investment columns out of a solution vector for this instance.
InvestmentPlan extract_investments(const MilpInstance& inst,
                                   const NetworkTopology& net,
                                   const std::vector<double>& x);

// Column/row tag grammar shared by the builder, evaluation and tests.
// Families (the part before '[') double as audit keys.
namespace tags {
std::string build(const std::string& pipe, int d);
std::string choose(const std::string& pipe);
std::string units(const std::string& site);
std::string prod(const std::string& site, int t);
std::string prod_cap(const std::string& site, int t);
std::string nonsup(const std::string& node, int t);
std::string balance(const std::string& node, int t);
std::string flow_in(const std::string& pipe, int t);
std::string flow_out(const std::string& pipe, int t);
std::string flow_avg(const std::string& pipe, int t);
std::string flow(const std::string& pipe, int t);
std::string press(const std::string& node, int t);
std::string press_sqr(const std::string& node, int t);
std::string fric(const std::string& pipe, int t);
std::string pack(const std::string& pipe, int t);
std::string cflow_in(const std::string& comp, int t);
std::string cflow_out(const std::string& comp, int t);
}  // namespace tags

}  // namespace h2plan
