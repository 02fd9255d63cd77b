#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gsbp {

// Fixed Gauss-Legendre rule on [-1, 1].  Nodes and weights are found by
// Newton iteration on the Legendre recurrence, so any order is available
// without tables.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  const std::vector<double>& nodes() const { return node_; }
  const std::vector<double>& weights() const { return weight_; }

  // Shared instances for the orders used throughout the library.
  static const GaussLegendre& order16();
  static const GaussLegendre& order20();

  template <class F>
  double apply(F&& g, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < node_.size(); ++i)
      acc += weight_[i] * g(mid + half * node_[i]);
    return acc * half;
  }

 private:
  std::vector<double> node_;
  std::vector<double> weight_;
};

// Composite rule over [a, b]: `uniform_panels` equal panels, where the first
// and/or last panel may be split geometrically toward its endpoint
// (`grade_*` halving levels) to absorb integrable endpoint singularities.
template <class F>
double integrate_composite(F&& g, double a, double b, int uniform_panels,
                           int grade_left = 0, int grade_right = 0,
                           const GaussLegendre& rule = GaussLegendre::order20()) {
  if (!(b > a)) return 0.0;
  if (uniform_panels < 1) uniform_panels = 1;
  const double h = (b - a) / uniform_panels;
  double acc = 0.0;
  for (int k = 0; k < uniform_panels; ++k) {
    double lo = a + k * h;
    double hi = (k + 1 == uniform_panels) ? b : a + (k + 1) * h;
    if (k == 0 && grade_left > 0) {
      // [lo, hi] -> geometric stack of panels shrinking toward lo.
      double right = hi;
      for (int lev = 0; lev < grade_left; ++lev) {
        double left = lo + (right - lo) * 0.5;
        acc += rule.apply(g, left, right);
        right = left;
      }
      // Innermost sliver: one last panel down to the endpoint itself.
      acc += rule.apply(g, lo, right);
      continue;
    }
    if (k + 1 == uniform_panels && grade_right > 0) {
      double left = lo;
      for (int lev = 0; lev < grade_right; ++lev) {
        double right = hi - (hi - left) * 0.5;
        acc += rule.apply(g, left, right);
        left = right;
      }
      acc += rule.apply(g, left, hi);
      continue;
    }
    acc += rule.apply(g, lo, hi);
  }
  return acc;
}

struct AdaptiveResult {
  double value = 0.0;
  double last_delta = 0.0;  // |value - previous estimate|
  int panels = 0;
};

// Panel doubling until successive composite estimates agree to
// max(abs_tol, rel_tol*|value|); panel count capped at `max_panels`.
template <class F>
AdaptiveResult integrate_doubling(F&& g, double a, double b, double abs_tol,
                                  double rel_tol, int start_panels = 32,
                                  int max_panels = 1 << 14, int grade_left = 0,
                                  int grade_right = 0) {
  AdaptiveResult r;
  double prev = integrate_composite(g, a, b, start_panels, grade_left, grade_right);
  int panels = start_panels;
  while (panels < max_panels) {
    panels *= 2;
    double cur = integrate_composite(g, a, b, panels, grade_left, grade_right);
    r.value = cur;
    r.last_delta = std::abs(cur - prev);
    r.panels = panels;
    if (r.last_delta <= std::max(abs_tol, rel_tol * std::abs(cur))) return r;
    prev = cur;
  }
  r.value = prev;
  r.panels = panels;
  return r;
}

// Bracketing root finder (Illinois variant of regula falsi).  f(a) and f(b)
// must have opposite signs; returns an abscissa with bracket width <= xtol
// (absolute, plus a relative floor) or an exact sign change.
template <class F>
double find_root(F&& f, double a, double b, double xtol = 1e-13,
                 int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::invalid_argument("find_root: endpoints do not bracket a root");
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double m = (fa * b - fb * a) / (fa - fb);
    // Keep the secant point strictly inside; fall back to midpoint.
    if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0 || std::abs(b - a) <= xtol + 1e-15 * std::abs(m)) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = m;
      fb = fm;
      if (side == +1) fa *= 0.5;
      side = +1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace gsbp
