#include "gsbp/occupancy.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gsbp/quadrature.hpp"

namespace gsbp {

namespace {

constexpr double kDirectCap = 60000.0;  // staircase path beyond this many terms

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1e-3) {
    throw std::invalid_argument("eps must lie in (0, 1e-3], got " +
                                std::to_string(eps));
  }
}

// 1 - (1 - w)^n resp. 1 - e^{-t w}.  Direct-sum terms saturate to exactly 1
// once n w > 36 (the complement is below one ulp); the staircase integrand
// keeps the full evaluation down to genuine underflow at n w > 746, because
// there each unit of the sum index is worth 1/|log(1-p)| boxes.
double kernel_term(bool poisson, double n, double w, double sat) {
  if (n * w > sat) return 1.0;
  if (poisson) return -std::expm1(-n * w);
  return -std::expm1(n * std::log1p(-w));
}

// Scaled polynomial part of the continuous-index weight w(y) = p q^{y-1} P(y)/c.
double poly_over_c(int s, double p, double y) {
  switch (s) {
    case 2:
      return 1.0;
    case 3:
      return 0.5 * (1.0 + y * p);
    default:
      return (2.0 + 2.0 * y * p + y * p * p + y * y * p * p) / 6.0;
  }
}

// First three derivatives of log w at continuous index y (s <= 4 only).
struct LogDerivs {
  double l1, l2, l3;
};

LogDerivs log_derivs(int s, double p, double y, double lnq) {
  if (s == 2) return {lnq, 0.0, 0.0};
  if (s == 3) {
    const double a = p / (1.0 + y * p);
    return {lnq + a, -a * a, 2.0 * a * a * a};
  }
  const double P = 2.0 + 2.0 * y * p + y * p * p + y * y * p * p;
  const double a = (2.0 * p + p * p + 2.0 * y * p * p) / P;
  const double b = 2.0 * p * p / P;
  return {lnq + a, b - a * a, 2.0 * a * a * a - 3.0 * a * b};
}

struct KernelDerivs {
  double g, g1, g3;
};

// g, g', g''' of the occupancy kernel at continuous index y.
KernelDerivs kernel_derivs(int s, double p, bool poisson, double n, double y) {
  const double lnq = std::log1p(-p);
  const double w = p * std::exp((y - 1.0) * lnq) * poly_over_c(s, p, y);
  const LogDerivs ld = log_derivs(s, p, y, lnq);
  const double w1 = w * ld.l1;
  const double w2 = w * (ld.l1 * ld.l1 + ld.l2);
  const double w3 = w * (ld.l1 * ld.l1 * ld.l1 + 3.0 * ld.l1 * ld.l2 + ld.l3);
  if (poisson) {
    if (n * w > 745.0) return {1.0, 0.0, 0.0};
    const double e = std::exp(-n * w);
    return {-std::expm1(-n * w), n * w1 * e,
            e * (n * w3 - 3.0 * n * n * w1 * w2 + n * n * n * w1 * w1 * w1)};
  }
  const double lp = std::log1p(-w);
  if ((n - 1.0) * (-lp) > 745.0) return {1.0, 0.0, 0.0};
  const double B = n * std::exp((n - 1.0) * lp);
  const double u = 1.0 - w;
  return {kernel_term(false, n, w, 746.0), B * w1,
          B * (w3 - 3.0 * (n - 1.0) * w1 * w2 / u +
               (n - 1.0) * (n - 2.0) * w1 * w1 * w1 / (u * u))};
}

// Integral of w(y) over [Y, infinity), grouped so nothing overflows even for
// subnormal lambda.  a = lambda * Y stays of order tau_deep.
double weight_integral_tail(int s, double p, double lam, double Y) {
  const double a = lam * Y;
  const double base = p * std::exp(-lam * (Y - 1.0)) / lam;
  if (s == 2) return base;
  const double r = p / lam;  // <= 1
  if (s == 3) return 0.5 * base * (1.0 + r * (a + 1.0));
  return base *
         (2.0 + (2.0 + p) * r * (a + 1.0) + r * r * (a * a + 2.0 * a + 2.0)) /
         6.0;
}

// Direct term-by-term sum; the far tail (n w_j small) collapses to its
// first-order value n * tail_mass once the quadratic correction fits eps/4.
double sum_direct(const WeightFamily& fam, SuccessProbability p, bool poisson,
                  double n, double eps) {
  const double zcut = std::sqrt(eps) * 1e-2;
  double acc = 0.0, comp = 0.0;
  for (std::int64_t j = 1;; ++j) {
    const double w = weight(fam, p, j);
    const double z = n * w;
    if (z <= zcut) {
      const double m = n * tail_mass(fam, p, j - 1);
      if (0.5 * z * m <= 0.25 * eps) {
        acc += m;
        break;
      }
    }
    const double term = kernel_term(poisson, n, w, 36.0);
    const double t = acc + term;  // Kahan
    comp += (std::fabs(acc) >= std::fabs(term)) ? (acc - t) + term
                                                : (term - t) + acc;
    acc = t;
    if (j > 500000) throw std::runtime_error("direct occupancy sum ran away");
  }
  return acc + comp;
}

// Euler-Maclaurin over [1, infinity) in the coordinate tau = (y-1)|log(1-p)|:
// the head where the kernel is 1 to the last bit is taken exactly, one Gauss
// panel per unit of tau covers the transition, the far tail switches to its
// first-order integral once n w <= eps/(8n), and corrections at y = 1 through
// the B_4 term close the sum.  Remainder is O(|log(1-p)|^3), far below eps.
double sum_staircase(const WeightFamily& fam, SuccessProbability p,
                     bool poisson, double n, double eps) {
  const int s = fam.rods();
  if (s > 4) {
    throw std::runtime_error(
        "occupancy for s >= 5 requires the direct sum; this p needs more than "
        "60000 terms");
  }
  const double pv = p.value();
  const double lnq = std::log1p(-pv);
  const double lam = -lnq;
  const double z0 = n * pv * poly_over_c(s, pv, 1.0);
  const double tau_lo = std::max(0.0, std::log(std::max(z0, 1.0)) - 6.7);
  const double z_deep = 0.125 * eps / n;

  auto z_at_tau = [&](double tau) {
    return n * pv * std::exp(-tau) * poly_over_c(s, pv, 1.0 + tau / lam);
  };
  double tau_deep =
      std::max(tau_lo, std::log(std::max(z0, z_deep) / z_deep)) + 12.0;
  while (z_at_tau(tau_deep) > z_deep) tau_deep += 5.0;

  auto g_tau = [&](double tau) {
    const double y = 1.0 + tau / lam;
    return kernel_term(poisson, n, pv * std::exp(-tau) * poly_over_c(s, pv, y),
                       746.0);
  };
  const int panels = std::max(1, static_cast<int>(std::ceil(tau_deep - tau_lo)));
  const double integral_y =
      (tau_lo + integrate_composite(g_tau, tau_lo, tau_deep, panels, 0, 0,
                                    GaussLegendre::order16())) /
      lam;

  const KernelDerivs d1 = kernel_derivs(s, pv, poisson, n, 1.0);
  return integral_y + n * weight_integral_tail(s, pv, lam, 1.0 + tau_deep / lam) +
         0.5 * d1.g - d1.g1 / 12.0 + d1.g3 / 720.0;
}

double occupancy_sum(const WeightFamily& fam, SuccessProbability p,
                     bool poisson, double n, double eps) {
  const double lam = -std::log1p(-p.value());
  const double span = std::log(std::max(n, 2.0)) - std::log(eps) + 12.0;
  if (span <= kDirectCap * lam) return sum_direct(fam, p, poisson, n, eps);
  return sum_staircase(fam, p, poisson, n, eps);
}

double prior_average(const SuccessPrior& prior, const WeightFamily& fam,
                     bool poisson, double n, double eps) {
  // E(K_n | p) <= n, so prior tail mass eps/(2n) keeps the truncation under
  // eps/2; pointwise and quadrature budgets take eps/2 each.
  const double tail_eps = std::max(1e-290, std::min(0.5, 0.5 * eps / n));
  const double T = prior.truncation_time(tail_eps);
  const double inner_eps = 0.5 * eps;
  auto g = [&](double t) {
    if (t <= 0.0) return prior.density_t(t);  // p -> 1: exactly one box
    const double pv = std::exp(-t);
    if (pv >= 1.0) return prior.density_t(t);
    return occupancy_sum(fam, SuccessProbability(pv), poisson, n, inner_eps) *
           prior.density_t(t);
  };
  return integrate_doubling(g, 0.0, T, 0.5 * eps, 1e-7, 64, 1 << 13, 80, 0)
      .value;
}

}  // namespace

double expected_Kn_given_p(const WeightFamily& family, SuccessProbability p,
                           double n, double eps) {
  check_eps(eps);
  if (!(n >= 1.0)) throw std::invalid_argument("sample size must be >= 1");
  return occupancy_sum(family, p, false, n, eps);
}

double phi_given_p(const WeightFamily& family, SuccessProbability p, double t,
                   double eps) {
  check_eps(eps);
  if (!(t > 0.0) || t > 1e16) {
    throw std::invalid_argument("Poisson time must lie in (0, 1e16]");
  }
  return occupancy_sum(family, p, true, t, eps);
}

double expected_Kn(const SuccessPrior& prior, const WeightFamily& family,
                   double n, double eps) {
  check_eps(eps);
  if (!(n >= 1.0)) throw std::invalid_argument("sample size must be >= 1");
  return prior_average(prior, family, false, n, eps);
}

double phi(const SuccessPrior& prior, const WeightFamily& family, double t,
           double eps) {
  check_eps(eps);
  if (!(t > 0.0) || t > 1e16) {
    throw std::invalid_argument("Poisson time must lie in (0, 1e16]");
  }
  return prior_average(prior, family, true, t, eps);
}

PoissonizationGap poissonization_gap(const WeightFamily& family,
                                     SuccessProbability p, double n,
                                     double eps) {
  if (!(n >= 2.0)) throw std::invalid_argument("gap check needs n >= 2");
  const double e = expected_Kn_given_p(family, p, n, eps);
  const double f = phi_given_p(family, p, n, eps);
  return {std::fabs(e - f), 2.0 / n * f};
}

PoissonizationGap poissonization_gap(const SuccessPrior& prior,
                                     const WeightFamily& family, double n,
                                     double eps) {
  if (!(n >= 2.0)) throw std::invalid_argument("gap check needs n >= 2");
  const double e = expected_Kn(prior, family, n, eps);
  const double f = phi(prior, family, n, eps);
  return {std::fabs(e - f), 2.0 / n * f};
}

}  // namespace gsbp
