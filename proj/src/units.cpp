#include "h2plan/units.hpp"

namespace h2plan::units {

double si_factor(Quantity q) {
  switch (q) {
    case Quantity::MassFlow:
      return 1000.0 / 3600.0;
    case Quantity::Pressure:
      return 1e5;
    case Quantity::Energy:
      return 3.6e9;
    case Quantity::Power:
      return 1e6;
    case Quantity::Efficiency:
      return 1.0 / 3.6e9;
    case Quantity::EnergyCost:
      return 1.0 / 3.6e9;
    case Quantity::Duration:
      return 3600.0;
  }
  throw std::invalid_argument("unknown quantity");
}

double to_si(double value, Quantity q) { return value * si_factor(q); }

double from_si(double value, Quantity q) { return value / si_factor(q); }

Quantity quantity_from_tag(const std::string& tag) {
  if (tag == "t/h") return Quantity::MassFlow;
  if (tag == "bar") return Quantity::Pressure;
  if (tag == "MWh") return Quantity::Energy;
  if (tag == "MW") return Quantity::Power;
  if (tag == "kg/MWh") return Quantity::Efficiency;
  if (tag == "EUR/MWh") return Quantity::EnergyCost;
  if (tag == "h") return Quantity::Duration;
  throw std::invalid_argument("unknown unit tag '" + tag + "'");
}

double to_si(double value, const std::string& tag) {
  return to_si(value, quantity_from_tag(tag));
}

double from_si(double value, const std::string& tag) {
  return from_si(value, quantity_from_tag(tag));
}

}  // namespace h2plan::units
