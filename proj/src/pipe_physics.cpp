#include "h2plan/pipe_physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace h2plan::physics {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

constexpr double pi = std::numbers::pi;

}  // namespace

double nikuradse_friction(double diameter, double roughness) {
  require_positive(diameter, "diameter");
  require_positive(roughness, "roughness");
  if (diameter <= roughness)
    throw std::invalid_argument("diameter must exceed roughness");
  double denom = 2.0 * std::log10(diameter / roughness) + 1.14;
  return 1.0 / (denom * denom);
}

double resistance(double length, double diameter, double friction,
                  double sound_speed) {
  require_positive(length, "length");
  require_positive(diameter, "diameter");
  require_positive(friction, "friction");
  require_positive(sound_speed, "sound_speed");
  return 16.0 * sound_speed * sound_speed * length * friction /
         (pi * pi * std::pow(diameter, 5));
}

double linepack_coefficient(double length, double diameter, double sound_speed) {
  require_positive(length, "length");
  require_positive(diameter, "diameter");
  require_positive(sound_speed, "sound_speed");
  return 8.0 * sound_speed * sound_speed / (pi * length * diameter * diameter);
}

double max_steady_flow(double pressure_max, double resistance) {
  require_positive(pressure_max, "pressure_max");
  require_positive(resistance, "resistance");
  return std::sqrt(pressure_max * pressure_max / resistance);
}

double linepack_mass(double length, double diameter, double pressure,
                     double sound_speed) {
  require_positive(length, "length");
  require_positive(diameter, "diameter");
  require_positive(pressure, "pressure");
  require_positive(sound_speed, "sound_speed");
  return pi * length * pressure * diameter * diameter /
         (4.0 * sound_speed * sound_speed);
}

double steady_flow(double p_from, double p_to, double resistance) {
  require_positive(p_from, "p_from");
  require_positive(p_to, "p_to");
  require_positive(resistance, "resistance");
  double diff = p_from * p_from - p_to * p_to;
  double mag = std::sqrt(std::fabs(diff) / resistance);
  return diff < 0.0 ? -mag : mag;
}

PipeCoefficients compute_coefficients(const CandidatePipeline& pipe,
                                      const DiameterOption& option,
                                      double pressure_min, double pressure_max,
                                      double sound_speed) {
  PipeCoefficients c;
  c.resistance = resistance(pipe.length, option.diameter, option.friction, sound_speed);
  c.linepack_coeff = linepack_coefficient(pipe.length, option.diameter, sound_speed);
  c.max_flow = max_steady_flow(pressure_max, c.resistance);
  c.linepack_min = linepack_mass(pipe.length, option.diameter, pressure_min, sound_speed);
  c.linepack_max = linepack_mass(pipe.length, option.diameter, pressure_max, sound_speed);
  return c;
}

}  // namespace h2plan::physics
