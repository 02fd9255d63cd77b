#pragma once

namespace gsbp {

// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286061;

// -log(1 - e^{-t}) for t > 0; stable at both endpoints.
double neg_log1m_exp(double t);

// f(t) = e^{-t} / (-log(1 - e^{-t})).
// Strictly increasing on (0, inf): ~ 1/log(1/t) near 0, 1 - f(t) ~ e^{-t}/2
// for large t.  Computed so that rounded values stay monotone where the true
// increment is below one ulp.
double f_t(double t);

// 1 - f(t) without cancellation (series in u = e^{-t} once u is small).
double one_minus_f(double t);

// F(x) = int_0^x f(t) dt.  Cached panel table on [0, 30], switching to the
// asymptotic form x - gamma + e^{-x}/2 + e^{-2x}/24 beyond.  Absolute error
// well under 1e-10.
double F_cap(double x);

// int_0^x (x-t)^k f(t) dt / k!  for k in [0, 12].
double fractional_integral_F(int k, double x);

// Same quantity evaluated through F by Cauchy repeated integration,
// int_0^x (x-t)^{k-1} F(t) dt / (k-1)!; an independent path for cross-checks.
double fractional_integral_F_via_F(int k, double x);

enum class LambertBranch { principal, minus_one };

// Solve w e^w = z.  principal: z >= -1/e; minus_one: z in [-1/e, 0).
// Branch-point series / asymptotic starts, Halley or log-form Newton body,
// bracketed fallback.  Defect |w e^w - z| <= 1e-13 * max(|z|, tiny).
double lambert_w(LambertBranch branch, double z);

// Two-term lower-branch asymptote log(-z) - log(-log(-z)), z in (-1/e, 0).
double lambert_wm1_two_term(double z);

}  // namespace gsbp
