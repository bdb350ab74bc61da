#pragma once

#include <vector>

namespace h2plan {

enum class PwlShape {
  Square,        // g(x) = x^2
  SignedSquare,  // g(x) = x|x|
};

double pwl_eval(PwlShape shape, double x);

// Equidistant piecewise-linear interpolant of g on [lo, hi] with K segments.
// Exact at breakpoints; max_error is the exact sup-norm of interpolant - g.
struct PwlApprox {
  PwlShape shape = PwlShape::Square;
  double lo = 0.0;
  double hi = 0.0;
  int segments = 0;
  std::vector<double> breaks;
  std::vector<double> values;
  double max_error = 0.0;

  double interp(double x) const;
  int segment_of(double x) const;

  // Requires lo <= hi and K >= 1; a zero-width domain yields a degenerate
  // single-point approximation with zero error.
  static PwlApprox build(PwlShape shape, double lo, double hi, int segments);
};

}  // namespace h2plan
