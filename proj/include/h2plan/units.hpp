#pragma once

#include <stdexcept>
#include <string>

namespace h2plan::units {

// Internal quantities are strict SI: kg/s, Pa, J, W, kg/J, EUR/J, s.
// Files and CLI speak the field units below; conversion happens exactly once,
// at the I/O boundary.
enum class Quantity {
  MassFlow,        // t/h    <-> kg/s
  Pressure,        // bar    <-> Pa
  Energy,          // MWh    <-> J
  Power,           // MW     <-> W
  Efficiency,      // kg/MWh <-> kg/J
  EnergyCost,      // EUR/MWh<-> EUR/J
  Duration,        // h      <-> s
};

// Multiplier turning one field unit into SI.
double si_factor(Quantity q);

double to_si(double value, Quantity q);
double from_si(double value, Quantity q);

// Tag-based variants for file parsing; throws std::invalid_argument on an
// unknown tag.
Quantity quantity_from_tag(const std::string& tag);
double to_si(double value, const std::string& tag);
double from_si(double value, const std::string& tag);

inline constexpr double seconds_per_year = 8760.0 * 3600.0;

}  // namespace h2plan::units
