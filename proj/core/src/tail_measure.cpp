#include "gsbp/tail_measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gsbp/quadrature.hpp"
#include "gsbp/special.hpp"

namespace gsbp {

namespace {

constexpr double kInvE = 0.36787944117144232160;

void check_x(double x) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw std::invalid_argument("tail threshold x must lie in (0, 1), got " +
                                std::to_string(x));
  }
}

// Largest weight of the s = 3 family, w_1 = p (1 + p) / 2.
double w1_s3(double p) { return 0.5 * p * (1.0 + p); }

// Fixed-point iteration m_k = m_1 - log((1 + p + p m_{k-1}) / 2) / log(1 - p).
// With to_convergence the step count is ignored and iteration stops once the
// update falls below 1e-13 relative.
double m_iter_steps(double x, double p, int steps, bool to_convergence) {
  const double lnq = std::log1p(-p);
  const double m1 = std::log(x / p) / lnq;
  double m = m1;
  const int cap = to_convergence ? 200 : steps - 1;
  for (int i = 0; i < cap; ++i) {
    const double next = m1 - std::log(0.5 * (1.0 + p + p * m)) / lnq;
    const double delta = std::fabs(next - m);
    m = next;
    if (to_convergence && delta <= 1e-13 * std::max(1.0, std::fabs(m))) break;
  }
  return m;
}

// Continuous level m solving w_{m+1}(p) = x for s = 3, raw-double argument so
// quadrature nodes at p -> 1 bypass the validating wrapper.  Uses the W_{-1}
// branch; when the branch argument underflows to zero the fixed-point
// iteration takes over (its contraction factor is tiny exactly there).
double m3_raw(double x, double p) {
  if (w1_s3(p) < x) {
    throw std::domain_error("no level m >= 0: w_1(p) < x");
  }
  const double lnq = std::log1p(-p);
  double z = (2.0 * x * lnq / (p * p)) * std::exp(((1.0 + p) / p) * lnq);
  if (z == 0.0) {
    return std::max(0.0, m_iter_steps(x, p, 0, true));
  }
  if (z < -kInvE) {
    if (z > -kInvE * (1.0 + 1e-9)) {
      z = -kInvE;
    } else {
      throw std::domain_error("branch argument left [-1/e, 0)");
    }
  }
  const double w = lambert_w(LambertBranch::minus_one, z);
  const double m = (p * w - lnq) / (p * lnq) - 1.0;
  return std::max(0.0, m);
}

}  // namespace

double m_given_p_s3(double x, SuccessProbability p) {
  check_x(x);
  return m3_raw(x, p.value());
}

double m_iterative_s3(double x, SuccessProbability p, int k) {
  check_x(x);
  if (k < 1) throw std::invalid_argument("iteration count must be >= 1");
  if (w1_s3(p.value()) < x) {
    throw std::domain_error("no level m >= 0: w_1(p) < x");
  }
  return m_iter_steps(x, p.value(), k, false);
}

double x_tilde(double x) {
  check_x(x);
  return 4.0 * x / (1.0 + std::sqrt(1.0 + 8.0 * x));
}

std::int64_t nu_arrow_scan(const WeightFamily& family, SuccessProbability p,
                           double x) {
  check_x(x);
  std::int64_t count = 0;
  for (std::int64_t j = 1;; ++j) {
    if (weight(family, p, j) < x) break;
    ++count;
    if (j > 100000000) {
      throw std::runtime_error("scan exceeded 1e8 weights");
    }
  }
  return count;
}

TailCount nu_arrow_given_p(const WeightFamily& family, SuccessProbability p,
                           double x) {
  check_x(x);
  const double pv = p.value();
  const int s = family.rods();
  if (s == 2) {
    if (pv < x) return TailCount{0.0, TailMethod::ClosedForm};
    const double v = 1.0 + std::log(x / pv) / std::log1p(-pv);
    return TailCount{std::floor(v + 1e-12 * std::max(1.0, std::fabs(v))),
                     TailMethod::ClosedForm};
  }
  if (s == 3) {
    if (w1_s3(pv) < x) return TailCount{0.0, TailMethod::LambertW};
    const double v = m3_raw(x, pv) + 1.0;
    return TailCount{std::floor(v + 1e-12 * std::max(1.0, std::fabs(v))),
                     TailMethod::LambertW};
  }
  return TailCount{static_cast<double>(nu_arrow_scan(family, p, x)),
                   TailMethod::Scan};
}

namespace {

// Golden-section maximizer; g must be unimodal on [a, b].
template <typename G>
double unimodal_peak(G&& g, double a, double b) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < 240 && (b - a) > 1e-13 * std::max(1.0, std::fabs(b));
       ++i) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TailCount nu_arrow(const SuccessPrior& prior, const WeightFamily& family,
                   double x) {
  check_x(x);
  const int s = family.rods();
  if (s != 2 && s != 3) {
    throw std::invalid_argument("prior-averaged tail counts cover s in {2, 3}");
  }
  const double L = -std::log(x);
  // p < x (s=2) resp. w_1(p) < x (s=3) contributes nothing; x_tilde locates
  // the s=3 cutoff p with w_1(p) = x exactly, without cancellation.
  const double T = (s == 2) ? L : -std::log(x_tilde(x));
  // Below t_lo the double e^{-t} rounds to 1; prior mass there is < 1e-15.
  const double t_lo = 4e-16;
  if (T <= 2.0 * t_lo) {
    return TailCount{1.0 - prior.survival_t(T), TailMethod::Quadrature};
  }

  auto m_curve = [&](double t) {
    if (s == 2) return (L - t) / neg_log1m_exp(t);
    const double pv = std::exp(-t);
    if (pv >= 1.0 || w1_s3(pv) < x) return 0.0;
    return m3_raw(x, pv);
  };
  // log w_{k+1}(e^{-t}) - log x; positive exactly on the level set {m >= k}.
  auto level_gap = [&](double t, double k) {
    double g = L - t - k * neg_log1m_exp(t);
    if (s == 3) g += std::log(0.5 * (1.0 + std::exp(-t) + std::exp(-t) * k));
    return g;
  };

  const double t_peak = unimodal_peak(m_curve, t_lo, T);
  double total = 1.0 - prior.survival_t(T);
  double theta_prev = std::log(t_lo);
  double beta_prev = T;
  for (double k = 1.0;; k += 1.0) {
    if (k > 5e6) throw std::runtime_error("level walk exceeded 5e6 levels");
    if (level_gap(t_peak, k) <= 0.0) break;
    double alpha;
    if (level_gap(t_lo, k) >= 0.0) {
      alpha = t_lo;
    } else if (level_gap(std::exp(theta_prev), k) >= 0.0) {
      // Successive level edges closer than rounding noise in the gap; the
      // previous crossing is correct to within one ulp of t.
      alpha = std::exp(theta_prev);
    } else {
      // Left crossings crowd toward 0; root-find in log t.
      const double theta = find_root(
          [&](double th) { return level_gap(std::exp(th), k); }, theta_prev,
          std::log(t_peak), 1e-12);
      alpha = std::exp(theta);
      theta_prev = theta;
    }
    double beta;
    if (level_gap(T, k) >= 0.0) {
      beta = T;
    } else if (level_gap(beta_prev, k) >= 0.0) {
      beta = beta_prev;
    } else {
      beta = find_root([&](double t) { return level_gap(t, k); }, t_peak,
                       beta_prev, 1e-13);
      beta_prev = beta;
    }
    const double mass = prior.survival_t(alpha) - prior.survival_t(beta);
    if (k >= 8.0 && 0.5 * mass <= 4e-7 * total) {
      // Remainder over the current level set: floor(m) - (k-1) integrates to
      // m - k + 1/2 up to +-mass/2, already inside the stopping budget.
      auto rem = [&](double t) {
        return (m_curve(t) - (k - 0.5)) * prior.density_t(t);
      };
      total += integrate_doubling(rem, alpha, beta, 2e-7 * total, 1e-8, 64,
                                  1 << 14, 40, 70)
                   .value;
      return TailCount{total, TailMethod::Quadrature};
    }
    total += mass;
  }
  return TailCount{total, TailMethod::Quadrature};
}

double m_of_x(const SuccessPrior& prior, const WeightFamily& family, double x) {
  check_x(x);
  const int s = family.rods();
  if (s != 2 && s != 3) {
    throw std::invalid_argument("prior-averaged tail counts cover s in {2, 3}");
  }
  const double L = -std::log(x);
  if (s == 2) {
    auto g = [&](double t) {
      return (L - t) * prior.density_t(t) / neg_log1m_exp(t);
    };
    return integrate_doubling(g, 0.0, L, 1e-12, 5e-9, 64, 1 << 14, 80, 0)
        .value;
  }
  const double T = -std::log(x_tilde(x));
  auto g = [&](double t) {
    if (t < 1e-15 || t >= T) return 0.0;
    const double pv = std::exp(-t);
    if (pv >= 1.0 || w1_s3(pv) < x) return 0.0;
    return m3_raw(x, pv) * prior.density_t(t);
  };
  return integrate_doubling(g, 0.0, T, 1e-12, 5e-9, 64, 1 << 14, 60, 70).value;
}

}  // namespace gsbp
