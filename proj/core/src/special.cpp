#include "gsbp/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gsbp/quadrature.hpp"

namespace gsbp {

namespace {

constexpr double kInvE = 0.36787944117144232160;  // 1/e

// Sum_{k>=0} u^k/(k+c) by Horner, enough terms for |u| <= 0.25 at double
// precision.
double reciprocal_series(double u, int c) {
  constexpr int kTerms = 40;
  double acc = 1.0 / (kTerms - 1 + c);
  for (int k = kTerms - 2; k >= 0; --k) acc = acc * u + 1.0 / (k + c);
  return acc;
}

}  // namespace

double neg_log1m_exp(double t) {
  if (!(t > 0.0)) throw std::domain_error("neg_log1m_exp: t must be positive");
  if (t < 0.6931471805599453) return -std::log(-std::expm1(-t));
  return -std::log1p(-std::exp(-t));
}

double f_t(double t) {
  if (!(t > 0.0)) throw std::domain_error("f_t: t must be positive");
  const double u = std::exp(-t);
  if (u <= 0.25) {
    // f = u / Lambda = 1 / (1 + u/2 + u^2/3 + ...); every operation in the
    // Horner chain is monotone in u, so rounded values cannot jitter against
    // the true (monotone) trend.
    return 1.0 / reciprocal_series(u, 1);
  }
  return u / neg_log1m_exp(t);
}

double one_minus_f(double t) {
  if (!(t > 0.0))
    throw std::domain_error("one_minus_f: t must be positive");
  const double u = std::exp(-t);
  if (u <= 0.25) {
    // (Lambda - u)/Lambda with both parts as series in u; no cancellation.
    return u * reciprocal_series(u, 2) / reciprocal_series(u, 1);
  }
  return 1.0 - f_t(t);
}

namespace {

// Tabulated F on [0, kSwitch] at spacing kStep; the first panel is graded
// toward the logarithmic endpoint singularity of f.
constexpr double kFStep = 0.25;
constexpr double kFSwitch = 30.0;

struct FTable {
  std::vector<double> value;  // value[k] = F(k * kFStep)
  FTable() {
    const int n = static_cast<int>(kFSwitch / kFStep) + 1;
    value.resize(n);
    value[0] = 0.0;
    value[1] = integrate_composite([](double t) { return f_t(t); }, 0.0,
                                   kFStep, 1, /*grade_left=*/80);
    const auto& rule = GaussLegendre::order20();
    for (int k = 2; k < n; ++k)
      value[k] = value[k - 1] +
                 rule.apply([](double t) { return f_t(t); }, (k - 1) * kFStep,
                            k * kFStep);
  }
};

const FTable& f_table() {
  static const FTable table;
  return table;
}

}  // namespace

double F_cap(double x) {
  if (!(x >= 0.0)) throw std::domain_error("F_cap: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x >= kFSwitch) {
    const double tail = 0.5 * std::exp(-x) + std::exp(-2.0 * x) / 24.0;
    return (x - euler_gamma) + tail;
  }
  const auto& tab = f_table();
  const int k = static_cast<int>(x / kFStep);
  const double lo = k * kFStep;
  if (k == 0)
    return integrate_composite([](double t) { return f_t(t); }, 0.0, x, 1,
                               /*grade_left=*/80);
  if (x == lo) return tab.value[k];
  return tab.value[k] +
         GaussLegendre::order20().apply([](double t) { return f_t(t); }, lo, x);
}

double fractional_integral_F(int k, double x) {
  if (k < 0 || k > 12)
    throw std::domain_error("fractional_integral_F: k out of [0, 12]");
  if (!(x >= 0.0))
    throw std::domain_error("fractional_integral_F: x must be nonnegative");
  if (x == 0.0) return 0.0;
  double kfac = 1.0;
  for (int i = 2; i <= k; ++i) kfac *= i;
  const int panels = std::clamp(static_cast<int>(x / 0.5) + 1, 8, 4096);
  const double integral = integrate_composite(
      [&](double t) { return std::pow(x - t, k) * f_t(t); }, 0.0, x, panels,
      /*grade_left=*/70);
  return integral / kfac;
}

double fractional_integral_F_via_F(int k, double x) {
  if (k < 0 || k > 12)
    throw std::domain_error("fractional_integral_F_via_F: k out of [0, 12]");
  if (!(x >= 0.0))
    throw std::domain_error("fractional_integral_F_via_F: x nonnegative");
  if (k == 0) return F_cap(x);
  if (x == 0.0) return 0.0;
  double kfac = 1.0;
  for (int i = 2; i < k; ++i) kfac *= i;
  const int panels = std::clamp(static_cast<int>(x / 0.5) + 1, 8, 4096);
  const double integral = integrate_composite(
      [&](double t) { return std::pow(x - t, k - 1) * F_cap(t); }, 0.0, x,
      panels, /*grade_left=*/40);
  return integral / kfac;
}

namespace {

// Branch-point expansion in sigma = sqrt(2(1 + e z)); sign +1 selects the
// principal branch, -1 the lower branch.
double branch_point_series(double sigma, double sign) {
  const double s = sign * sigma;
  return -1.0 + s - sigma * sigma / 3.0 + (11.0 / 72.0) * s * sigma * sigma -
         (43.0 / 540.0) * sigma * sigma * sigma * sigma +
         (769.0 / 17280.0) * s * sigma * sigma * sigma * sigma;
}

// Halley refinement of w e^w = z; safe once |w + 1| is not tiny.
double halley_polish(double w, double z) {
  for (int it = 0; it < 4; ++it) {
    if (std::abs(w + 1.0) < 1e-7) break;  // branch point: series is better
    const double e = std::exp(w);
    const double g = w * e - z;
    if (g == 0.0) break;
    const double d1 = e * (w + 1.0);
    const double denom = d1 - g * (w + 2.0) / (2.0 * (w + 1.0));
    if (denom == 0.0) break;
    const double step = g / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double lambert_w0(double z) {
  if (z == 0.0) return 0.0;
  double sigma2 = 2.0 * (1.0 + std::exp(1.0) * z);
  if (sigma2 < 0.0) {
    if (z > -kInvE * (1.0 + 4e-15)) sigma2 = 0.0;
    else throw std::domain_error("lambert_w: z below -1/e");
  }
  double w;
  if (sigma2 <= 0.25) {
    w = branch_point_series(std::sqrt(sigma2), +1.0);
  } else if (std::abs(z) <= 0.2) {
    w = z * (1.0 + z * (-1.0 + z * (1.5 - (8.0 / 3.0) * z)));
  } else if (z <= 2.0) {
    // Bracketed solve; W0 is increasing.
    double lo = -1.0, hi = (z < 0.0) ? 0.0 : 1.0 + std::log1p(z);
    w = find_root([z](double v) { return v * std::exp(v) - z; }, lo, hi, 1e-14);
  } else {
    const double l1 = std::log(z), l2 = std::log(std::log(z));
    w = l1 - l2 + l2 / l1;
  }
  return halley_polish(w, z);
}

double lambert_wm1(double z) {
  if (!(z < 0.0))
    throw std::domain_error("lambert_w: lower branch needs z < 0");
  if (z < -kInvE) {
    if (z > -kInvE * (1.0 + 1e-9)) z = -kInvE;
    else throw std::domain_error("lambert_w: z below -1/e");
  }
  double sigma2 = std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * z));
  const double sigma = std::sqrt(sigma2);
  if (sigma == 0.0) return -1.0;
  double w;
  if (sigma <= 0.5) {
    w = branch_point_series(sigma, -1.0);
  } else {
    // Solve w + log(-w) = log(-z): immune to exp underflow and cannot hop
    // onto the principal branch.
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    double lo = l1 - l2 - 2.0;
    w = find_root([l1](double v) { return v + std::log(-v) - l1; }, lo, -1.0,
                  1e-14);
  }
  if (w > -700.0) w = halley_polish(w, z);
  return w;
}

}  // namespace

double lambert_w(LambertBranch branch, double z) {
  if (!std::isfinite(z)) throw std::domain_error("lambert_w: z not finite");
  return branch == LambertBranch::principal ? lambert_w0(z) : lambert_wm1(z);
}

double lambert_wm1_two_term(double z) {
  if (!(z < 0.0) || !(z > -kInvE))
    throw std::domain_error("lambert_wm1_two_term: z must lie in (-1/e, 0)");
  const double l1 = std::log(-z);
  return l1 - std::log(-l1);
}

}  // namespace gsbp
