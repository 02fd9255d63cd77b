#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gsbp/priors.hpp"
#include "gsbp/weights.hpp"

namespace gsbp {

struct ExpansionTerm {
  std::string label;
  double value;
};

// One asymptotic prediction next to its computed reference.  predicted_total
// is the exact sum of the terms; normalized_residual divides the residual by
// the scale of the first neglected order, so it should stay bounded (or sink)
// as the argument grows.
struct ExpansionReport {
  double argument = 0.0;
  std::vector<ExpansionTerm> terms;
  double predicted_total = 0.0;
  double reference_value = 0.0;
  double residual = 0.0;
  double normalized_residual = 0.0;
};

// E(K_n | p) against floor(log(np)/|log(1-p)| + 1) + gamma/|log(1-p)|.
ExpansionReport expand_fixed_p(SuccessProbability p, double n,
                               double eps = 1e-9);

// Uniform prior, geometric family: (1/2)L^2 - gamma L for the tail count at
// threshold x (L = log(1/x)), and (1/2)(log t)^2 for the Poissonized mean,
// where the two gamma terms cancel and are reported separately.
ExpansionReport expand_uniform_s2_tail(double x);
ExpansionReport expand_uniform_s2_mean(double t, double eps = 1e-9);

// LogGamma(m) prior, geometric family; m = 0 reduces to the uniform forms.
ExpansionReport expand_loggamma_m_tail(int m, double x);
ExpansionReport expand_loggamma_m_mean(int m, double t, double eps = 1e-9);

// LogGammaRho(rho) prior: leading term L^{rho+2}/Gamma(rho+3) only; no second
// order is available for fractional rho.
ExpansionReport expand_rho_mean(double rho, double t, double eps = 1e-9);

// Negative binomial family s = 3 under the uniform prior.
ExpansionReport expand_negbin_s3_tail(double x);
ExpansionReport expand_negbin_s3_mean(double t, double eps = 1e-9);

// Empirical de Haan constant (tail(lambda x) - tail(x)) / (ell(x) log lambda).
double de_haan_estimate(const std::function<double(double)>& tail_fn, double x,
                        double lambda, const std::function<double(double)>& ell);

// r(x) = int_0^x log(1 + (x-u) f(u)) f(u) du, absolute error <= 1e-8 x, and
// its remainder against the leading behaviour x log x - x.
double r_of_x(double x);
double r_remainder(double x);

}  // namespace gsbp
