#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "h2plan/pipe_physics.hpp"

using namespace h2plan;

namespace {

// Independent long-double recomputations, written from the formulas rather
// than the implementation, so the two can disagree.
long double friction_oracle(long double D, long double k) {
  long double base = 2.0L * std::log10(D / k) + 1.14L;
  return 1.0L / (base * base);
}

long double resistance_oracle(long double L, long double D, long double lam,
                              long double c) {
  const long double pi = 3.14159265358979323846L;
  return (16.0L * c * c * L * lam) / (pi * pi * D * D * D * D * D);
}

long double linepack_coeff_oracle(long double L, long double D, long double c) {
  const long double pi = 3.14159265358979323846L;
  return 8.0L * c * c / (pi * L * D * D);
}

long double max_flow_oracle(long double pmax, long double R) {
  return std::sqrt(pmax * pmax / R);
}

long double mass_oracle(long double L, long double D, long double p,
                        long double c) {
  const long double pi = 3.14159265358979323846L;
  return pi * L * p * D * D / (4.0L * c * c);
}

}  // namespace

TEST_CASE("friction factor reference point and shape") {
  double lam = physics::nikuradse_friction(0.9, 1e-4);
  CHECK(lam == doctest::Approx(0.012214).epsilon(1e-4));
  // closed-form inversion: D = k * 10^((x - 1.14)/2) gives lambda = x^-2
  for (double x : {3.0, 7.5, 11.0}) {
    double D = 1e-4 * std::pow(10.0, (x - 1.14) / 2.0);
    CHECK(physics::nikuradse_friction(D, 1e-4) ==
          doctest::Approx(1.0 / (x * x)).epsilon(1e-12));
  }
  CHECK(physics::nikuradse_friction(1.8, 1e-4) <
        physics::nikuradse_friction(0.9, 1e-4));
  CHECK(physics::nikuradse_friction(0.9, 2e-4) >
        physics::nikuradse_friction(0.9, 1e-4));
  CHECK_THROWS_AS(physics::nikuradse_friction(0.0, 1e-4),
                  std::invalid_argument);
  CHECK_THROWS_AS(physics::nikuradse_friction(0.9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(physics::nikuradse_friction(1e-4, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("resistance reference point and scalings") {
  double lam = physics::nikuradse_friction(0.9, 1e-4);
  double R = physics::resistance(60e3, 0.9, lam, 1320.0);
  CHECK(R == doctest::Approx(3.506e9).epsilon(1e-3));
  CHECK(physics::resistance(120e3, 0.9, lam, 1320.0) ==
        doctest::Approx(2.0 * R).epsilon(1e-12));
  CHECK(physics::resistance(60e3, 1.8, lam, 1320.0) ==
        doctest::Approx(R / 32.0).epsilon(1e-12));
  CHECK_THROWS_AS(physics::resistance(0.0, 0.9, lam, 1320.0),
                  std::invalid_argument);
}

TEST_CASE("linepack coefficient reference point and scalings") {
  double H = physics::linepack_coefficient(60e3, 0.9, 1320.0);
  CHECK(H == doctest::Approx(91.30).epsilon(1e-3));
  CHECK(physics::linepack_coefficient(60e3, 1.8, 1320.0) ==
        doctest::Approx(H / 4.0).epsilon(1e-12));
  CHECK(physics::linepack_coefficient(120e3, 0.9, 1320.0) ==
        doctest::Approx(H / 2.0).epsilon(1e-12));
}

TEST_CASE("max steady flow reference point and scalings") {
  double R = 3.506e9;
  double F = physics::max_steady_flow(7e6, R);
  CHECK(F == doctest::Approx(118.2).epsilon(1e-3));
  CHECK(physics::max_steady_flow(7e6, 4.0 * R) ==
        doctest::Approx(F / 2.0).epsilon(1e-12));
  CHECK(physics::max_steady_flow(14e6, R) ==
        doctest::Approx(2.0 * F).epsilon(1e-12));
}

TEST_CASE("linepack mass reference points") {
  double mmax = physics::linepack_mass(60e3, 0.9, 7e6, 1320.0);
  double mmin = physics::linepack_mass(60e3, 0.9, 4e6, 1320.0);
  CHECK(mmax == doctest::Approx(1.533e5).epsilon(1e-3));
  CHECK(mmin == doctest::Approx(mmax * 4.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("steady flow reference point, sign structure") {
  double R = 3.506e9;
  double f = physics::steady_flow(7e6, 4e6, R);
  CHECK(f == doctest::Approx(97.02).epsilon(1e-3));
  CHECK(physics::steady_flow(4e6, 7e6, R) == doctest::Approx(-f).epsilon(1e-12));
  CHECK(physics::steady_flow(5e6, 5e6, R) == 0.0);
  // the flow between the envelope bounds never exceeds the flow ceiling
  CHECK(physics::steady_flow(7e6, 4e6, R) <= physics::max_steady_flow(7e6, R));
}

TEST_CASE("randomized agreement with independent recomputation") {
  std::mt19937 rng(271828);
  std::uniform_real_distribution<double> diam(0.1, 2.0);
  std::uniform_real_distribution<double> rough(1e-5, 5e-4);
  std::uniform_real_distribution<double> length(1e3, 5e5);
  std::uniform_real_distribution<double> speed(250.0, 1500.0);
  std::uniform_real_distribution<double> press(1e5, 1e7);
  for (int it = 0; it < 100; ++it) {
    double D = diam(rng), k = rough(rng), L = length(rng), c = speed(rng);
    double p1 = press(rng), p2 = press(rng);
    if (p2 > p1) std::swap(p1, p2);

    double lam = physics::nikuradse_friction(D, k);
    CHECK(lam == doctest::Approx(static_cast<double>(friction_oracle(D, k)))
                     .epsilon(1e-12));
    double R = physics::resistance(L, D, lam, c);
    CHECK(R == doctest::Approx(static_cast<double>(
                       resistance_oracle(L, D, lam, c)))
                   .epsilon(1e-12));
    CHECK(physics::linepack_coefficient(L, D, c) ==
          doctest::Approx(static_cast<double>(linepack_coeff_oracle(L, D, c)))
              .epsilon(1e-12));
    CHECK(physics::max_steady_flow(p1, R) ==
          doctest::Approx(static_cast<double>(max_flow_oracle(p1, R)))
              .epsilon(1e-12));
    CHECK(physics::linepack_mass(L, D, p1, c) ==
          doctest::Approx(static_cast<double>(mass_oracle(L, D, p1, c)))
              .epsilon(1e-12));
    CHECK(physics::linepack_mass(L, D, p2, c) /
              physics::linepack_mass(L, D, p1, c) ==
          doctest::Approx(p2 / p1).epsilon(1e-12));
    double f = physics::steady_flow(p1, p2, R);
    long double diff = (long double)p1 * p1 - (long double)p2 * p2;
    CHECK(f == doctest::Approx(static_cast<double>(
                   std::sqrt(std::fabs(diff) / R))).epsilon(1e-12));
    CHECK(f >= 0.0);
  }
}

TEST_CASE("bundled coefficients match scalar operations") {
  CandidatePipeline pipe;
  pipe.id = "a1";
  pipe.from = "i";
  pipe.to = "j";
  pipe.length = 60e3;
  DiameterOption opt;
  opt.diameter = 0.9;
  opt.friction = physics::nikuradse_friction(0.9, physics::default_roughness);
  opt.invest_cost = 1.0;
  auto co = physics::compute_coefficients(pipe, opt, 4e6, 7e6, 1320.0);
  CHECK(co.resistance ==
        doctest::Approx(physics::resistance(60e3, 0.9, opt.friction, 1320.0))
            .epsilon(1e-15));
  CHECK(co.linepack_coeff ==
        doctest::Approx(physics::linepack_coefficient(60e3, 0.9, 1320.0))
            .epsilon(1e-15));
  CHECK(co.max_flow ==
        doctest::Approx(physics::max_steady_flow(7e6, co.resistance))
            .epsilon(1e-15));
  CHECK(co.linepack_min ==
        doctest::Approx(physics::linepack_mass(60e3, 0.9, 4e6, 1320.0))
            .epsilon(1e-15));
  CHECK(co.linepack_max ==
        doctest::Approx(physics::linepack_mass(60e3, 0.9, 7e6, 1320.0))
            .epsilon(1e-15));
  // consistency: linepack bounds scale with the pressure envelope
  CHECK(co.linepack_min / co.linepack_max == doctest::Approx(4.0 / 7.0));
}
