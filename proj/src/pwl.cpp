#include "h2plan/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace h2plan {

double pwl_eval(PwlShape shape, double x) {
  switch (shape) {
    case PwlShape::Square: return x * x;
    case PwlShape::SignedSquare: return x * std::fabs(x);
  }
  return 0.0;
}

double PwlApprox::interp(double x) const {
  int s = segment_of(x);
  double w = breaks[s + 1] - breaks[s];
  if (w <= 0.0) return values[s];
  double a = (x - breaks[s]) / w;
  return values[s] + a * (values[s + 1] - values[s]);
}

int PwlApprox::segment_of(double x) const {
  for (int s = 0; s + 1 < static_cast<int>(breaks.size()); ++s)
    if (x <= breaks[s + 1]) return s;
  return static_cast<int>(breaks.size()) - 2;
}

namespace {

// Exact chord error of x^2 over [a, b] with a >= 0 (or mirrored): (b-a)^2/4.
// A segment straddling zero needs the stationary points of chord - g on each
// side plus the kink at zero.
double segment_error(PwlShape shape, double a, double b) {
  double w = b - a;
  if (w <= 0.0) return 0.0;
  if (shape == PwlShape::Square || a >= 0.0 || b <= 0.0) return w * w / 4.0;
  double ga = pwl_eval(shape, a), gb = pwl_eval(shape, b);
  double s = (gb - ga) / w;
  auto chord = [&](double x) { return ga + s * (x - a); };
  double err = std::fabs(chord(0.0));
  double xp = s / 2.0;  // stationary point on the positive side (g = x^2)
  if (xp > 0.0 && xp < b) err = std::max(err, std::fabs(chord(xp) - xp * xp));
  double xn = -s / 2.0;  // stationary point on the negative side (g = -x^2)
  if (xn > a && xn < 0.0) err = std::max(err, std::fabs(chord(xn) + xn * xn));
  return err;
}

}  // namespace

PwlApprox PwlApprox::build(PwlShape shape, double lo, double hi, int segments) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("invalid PWL domain");
  if (segments < 1) throw std::invalid_argument("PWL needs at least one segment");

  PwlApprox p;
  p.shape = shape;
  p.lo = lo;
  p.hi = hi;

  if (hi - lo <= 0.0) {
    p.segments = 0;
    p.breaks = {lo};
    p.values = {pwl_eval(shape, lo)};
    p.max_error = 0.0;
    return p;
  }

  p.segments = segments;
  p.breaks.resize(segments + 1);
  p.values.resize(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    // Exact endpoints; interior points on the equidistant grid.
    double x = (k == segments) ? hi : lo + (hi - lo) * k / segments;
    p.breaks[k] = x;
    p.values[k] = pwl_eval(shape, x);
  }
  double err = 0.0;
  for (int k = 0; k < segments; ++k)
    err = std::max(err, segment_error(shape, p.breaks[k], p.breaks[k + 1]));
  p.max_error = err;
  return p;
}

}  // namespace h2plan
