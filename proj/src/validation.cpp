#include "h2plan/validation.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace h2plan {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_series(std::vector<std::string>& errors, const std::string& what,
                  const std::vector<double>& series, int horizon, bool allow_zero_len) {
  if (static_cast<int>(series.size()) != horizon && !(allow_zero_len && series.empty())) {
    std::ostringstream os;
    os << what << ": series length " << series.size() << " does not match horizon "
       << horizon;
    errors.push_back(os.str());
    return;
  }
  for (size_t t = 0; t < series.size(); ++t) {
    double v = series[t];
    if (!finite(v) || v < 0.0) {
      std::ostringstream os;
      os << what << ": invalid value at step " << t + 1;
      errors.push_back(os.str());
      return;
    }
  }
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : errors) os << e << "\n";
  return os.str();
}

ValidationReport validate(const NetworkTopology& net, const Scenario& scenario) {
  ValidationReport report;
  auto& errors = report.errors;

  std::set<std::string> node_ids;
  for (const auto& n : net.nodes) {
    if (!node_ids.insert(n.id).second)
      errors.push_back("duplicate node id '" + n.id + "'");
    if (!finite(n.pressure_min) || !finite(n.pressure_max) || n.pressure_min <= 0.0 ||
        n.pressure_min > n.pressure_max)
      errors.push_back("node '" + n.id + "': pressure bounds must satisfy 0 < min <= max");
  }

  if (!finite(net.sound_speed) || net.sound_speed <= 0.0)
    errors.push_back("sound speed must be positive");

  std::set<std::string> pipe_ids;
  for (const auto& p : net.pipelines) {
    if (!pipe_ids.insert(p.id).second)
      errors.push_back("duplicate pipeline id '" + p.id + "'");
    if (!node_ids.count(p.from) || !node_ids.count(p.to))
      errors.push_back("pipeline '" + p.id + "' references unknown node");
    if (p.from == p.to)
      errors.push_back("pipeline '" + p.id + "' connects a node to itself");
    if (!finite(p.length) || p.length <= 0.0)
      errors.push_back("pipeline '" + p.id + "': length must be positive");
    if (p.catalog.empty())
      errors.push_back("pipeline '" + p.id + "': empty diameter catalog");
    if (p.catalog.size() > 98)
      errors.push_back("pipeline '" + p.id + "': diameter catalog too large");
    for (size_t d = 0; d < p.catalog.size(); ++d) {
      const auto& opt = p.catalog[d];
      if (!finite(opt.diameter) || opt.diameter <= 0.0)
        errors.push_back("pipeline '" + p.id + "': non-positive diameter in catalog");
      if (!finite(opt.friction) || opt.friction <= 0.0)
        errors.push_back("pipeline '" + p.id + "': non-positive friction in catalog");
      if (!finite(opt.invest_cost) || opt.invest_cost < 0.0)
        errors.push_back("pipeline '" + p.id + "': negative invest cost in catalog");
      if (d > 0) {
        if (opt.diameter <= p.catalog[d - 1].diameter)
          errors.push_back("pipeline '" + p.id +
                           "': catalog diameters must be strictly increasing");
        if (opt.invest_cost <= p.catalog[d - 1].invest_cost)
          errors.push_back("pipeline '" + p.id +
                           "': catalog costs must be strictly increasing with diameter");
      }
    }
    if (p.pressure_min || p.pressure_max) {
      double lo = p.pressure_min.value_or(0.0);
      double hi = p.pressure_max.value_or(lo);
      if (p.pressure_min && (!finite(lo) || lo <= 0.0))
        errors.push_back("pipeline '" + p.id + "': pressure_min must be positive");
      if (p.pressure_min && p.pressure_max && lo > hi)
        errors.push_back("pipeline '" + p.id + "': pressure_min exceeds pressure_max");
    }
  }

  std::set<std::string> comp_ids;
  for (const auto& c : net.compressors) {
    if (!comp_ids.insert(c.id).second)
      errors.push_back("duplicate compressor id '" + c.id + "'");
    if (!node_ids.count(c.from) || !node_ids.count(c.to))
      errors.push_back("compressor '" + c.id + "' references unknown node");
    if (c.from == c.to)
      errors.push_back("compressor '" + c.id + "' connects a node to itself");
    if (!finite(c.ratio) || c.ratio < 1.0)
      errors.push_back("compressor '" + c.id + "': ratio must be >= 1");
  }

  std::set<std::string> site_ids;
  for (const auto& e : net.electrolyzers) {
    if (!site_ids.insert(e.id).second)
      errors.push_back("duplicate electrolyzer id '" + e.id + "'");
    if (!node_ids.count(e.node))
      errors.push_back("electrolyzer '" + e.id + "' references unknown node");
    if (!finite(e.efficiency) || e.efficiency <= 0.0)
      errors.push_back("electrolyzer '" + e.id + "': efficiency must be positive");
    if (!finite(e.unit_capacity) || e.unit_capacity <= 0.0)
      errors.push_back("electrolyzer '" + e.id + "': unit capacity must be positive");
    if (!finite(e.max_units) || e.max_units < 0.0)
      errors.push_back("electrolyzer '" + e.id + "': max units must be non-negative");
    if (!finite(e.invest_cost) || e.invest_cost < 0.0)
      errors.push_back("electrolyzer '" + e.id + "': invest cost must be non-negative");
    auto avail = scenario.availability.find(e.availability_series);
    if (avail == scenario.availability.end()) {
      errors.push_back("electrolyzer '" + e.id + "': availability series '" +
                       e.availability_series + "' not found");
    } else {
      check_series(errors, "availability series '" + e.availability_series + "'",
                   avail->second, scenario.horizon, false);
      for (double v : avail->second)
        if (finite(v) && v > e.unit_capacity * (1.0 + 1e-12)) {
          errors.push_back("electrolyzer '" + e.id +
                           "': availability exceeds unit capacity");
          break;
        }
    }
    auto cost = scenario.electricity_cost.find(e.electricity_cost_series);
    if (cost == scenario.electricity_cost.end())
      errors.push_back("electrolyzer '" + e.id + "': electricity cost series '" +
                       e.electricity_cost_series + "' not found");
    else
      check_series(errors, "electricity cost series '" + e.electricity_cost_series + "'",
                   cost->second, scenario.horizon, false);
  }

  if (scenario.horizon < 1) errors.push_back("scenario horizon must be at least 1");
  if (!finite(scenario.step) || scenario.step <= 0.0)
    errors.push_back("scenario step must be positive");
  if (!finite(scenario.ns_penalty) || scenario.ns_penalty <= 0.0)
    errors.push_back("non-supply penalty must be positive");

  for (const auto& [node, series] : scenario.demand) {
    if (!node_ids.count(node))
      errors.push_back("demand series references unknown node '" + node + "'");
    check_series(errors, "demand series for node '" + node + "'", series,
                 scenario.horizon, false);
  }

  return report;
}

}  // namespace h2plan
