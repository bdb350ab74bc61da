#pragma once

#include "h2plan/network.hpp"

namespace h2plan::physics {

inline constexpr double default_sound_speed = 1320.0;  // m/s
inline constexpr double default_roughness = 1e-4;      // m (0.1 mm)

// Nikuradse fully-rough friction factor, lambda = (2 log10(D/k) + 1.14)^-2.
double nikuradse_friction(double diameter, double roughness);

// Quadratic pressure-loss coefficient, R = 16 c^2 L lambda / (pi^2 D^5).
// Units: Pa^2 s^2 / kg^2.
double resistance(double length, double diameter, double friction,
                  double sound_speed);

// Linepack coefficient H = 8 c^2 / (pi L D^2); pipe mass m satisfies
// p_in + p_out = H m. Units: Pa s / kg.
double linepack_coefficient(double length, double diameter, double sound_speed);

// Largest sustainable steady flow for a pressure ceiling:
// Fbar = sqrt(pmax^2 / R) [kg/s].
double max_steady_flow(double pressure_max, double resistance);

// Gas mass stored at uniform pressure p: M = pi L p D^2 / (4 c^2) [kg].
double linepack_mass(double length, double diameter, double pressure,
                     double sound_speed);

// Signed steady-state flow between fixed end pressures:
// f = sign(pi^2 - pj^2) sqrt(|pi^2 - pj^2| / R) [kg/s].
double steady_flow(double p_from, double p_to, double resistance);

struct PipeCoefficients {
  double resistance = 0.0;      // R
  double linepack_coeff = 0.0;  // H
  double max_flow = 0.0;        // Fbar at the pipe's pressure ceiling
  double linepack_min = 0.0;    // mass at the pipe's pressure floor
  double linepack_max = 0.0;    // mass at the pipe's pressure ceiling
};

// Coefficients for one candidate diameter of one pipeline; pressure bounds are
// the pipe's effective envelope.
PipeCoefficients compute_coefficients(const CandidatePipeline& pipe,
                                      const DiameterOption& option,
                                      double pressure_min, double pressure_max,
                                      double sound_speed);

}  // namespace h2plan::physics
