#pragma once

#include <string>
#include <vector>

#include "h2plan/network.hpp"
#include "h2plan/scenario.hpp"

namespace h2plan {

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

// Structural and numeric checks on a case. Every error string names the
// offending entity so failures are actionable.
ValidationReport validate(const NetworkTopology& net, const Scenario& scenario);

}  // namespace h2plan
