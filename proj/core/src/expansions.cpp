#include "gsbp/expansions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gsbp/occupancy.hpp"
#include "gsbp/quadrature.hpp"
#include "gsbp/special.hpp"
#include "gsbp/tail_measure.hpp"

namespace gsbp {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

ExpansionReport assemble(double argument, std::vector<ExpansionTerm> terms,
                         double reference, double residual_scale) {
  ExpansionReport rep;
  rep.argument = argument;
  rep.terms = std::move(terms);
  for (const ExpansionTerm& t : rep.terms) rep.predicted_total += t.value;
  rep.reference_value = reference;
  rep.residual = reference - rep.predicted_total;
  rep.normalized_residual = rep.residual / residual_scale;
  return rep;
}

void check_tail_x(double x) {
  if (!(x > 0.0) || !(x < 0.36787944117144233)) {
    throw std::invalid_argument("tail expansions need x in (0, 1/e)");
  }
}

void check_mean_t(double t) {
  if (!(t >= 3.0)) {
    throw std::invalid_argument("mean expansions need t >= 3");
  }
}

}  // namespace

ExpansionReport expand_fixed_p(SuccessProbability p, double n, double eps) {
  if (!(n >= 2.0)) throw std::invalid_argument("fixed-p expansion needs n >= 2");
  const double lam = -std::log1p(-p.value());
  const double lead = std::floor(std::log(n * p.value()) / lam + 1.0);
  const double ref = expected_Kn_given_p(WeightFamily::geometric(), p, n, eps);
  return assemble(n,
                  {{"floor(log(np)/|log(1-p)| + 1)", lead},
                   {"gamma/|log(1-p)|", euler_gamma / lam}},
                  ref, 1.0);
}

ExpansionReport expand_uniform_s2_tail(double x) {
  check_tail_x(x);
  const double L = -std::log(x);
  const double ref =
      nu_arrow(SuccessPrior::uniform(), WeightFamily::geometric(), x).value;
  return assemble(
      x, {{"(1/2) log(1/x)^2", 0.5 * L * L}, {"-gamma log(1/x)", -euler_gamma * L}},
      ref, 1.0);
}

ExpansionReport expand_uniform_s2_mean(double t, double eps) {
  check_mean_t(t);
  const double L = std::log(t);
  const double ref =
      phi(SuccessPrior::uniform(), WeightFamily::geometric(), t, eps);
  // The tail count carries -gamma L; switching from threshold 1/t to sample
  // size t adds +gamma L back, so both are reported and cancel exactly.
  return assemble(t,
                  {{"(1/2) log(t)^2", 0.5 * L * L},
                   {"-gamma log(t) [tail count]", -euler_gamma * L},
                   {"+gamma log(t) [size-to-threshold]", euler_gamma * L}},
                  ref, L);
}

ExpansionReport expand_loggamma_m_tail(int m, double x) {
  if (m == 0) return expand_uniform_s2_tail(x);
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  check_tail_x(x);
  const double L = -std::log(x);
  const double ref =
      nu_arrow(SuccessPrior::log_gamma(m), WeightFamily::geometric(), x).value;
  const std::string lab =
      "log(1/x)^" + std::to_string(m + 2) + "/" + std::to_string(m + 2) + "!";
  return assemble(x, {{lab, std::pow(L, m + 2) / factorial(m + 2)}}, ref,
                  std::pow(L, m));
}

ExpansionReport expand_loggamma_m_mean(int m, double t, double eps) {
  if (m == 0) return expand_uniform_s2_mean(t, eps);
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  check_mean_t(t);
  const double L = std::log(t);
  const double ref =
      phi(SuccessPrior::log_gamma(m), WeightFamily::geometric(), t, eps);
  const std::string lab1 =
      "log(t)^" + std::to_string(m + 2) + "/" + std::to_string(m + 2) + "!";
  const std::string lab2 = "gamma log(t)^" + std::to_string(m + 1) + "/" +
                           std::to_string(m + 1) + "!";
  return assemble(
      t,
      {{lab1, std::pow(L, m + 2) / factorial(m + 2)},
       {lab2, euler_gamma * std::pow(L, m + 1) / factorial(m + 1)}},
      ref, std::pow(L, m + 1));
}

ExpansionReport expand_rho_mean(double rho, double t, double eps) {
  if (!(rho > -1.0)) throw std::invalid_argument("rho must exceed -1");
  check_mean_t(t);
  const double L = std::log(t);
  const double ref =
      phi(SuccessPrior::log_gamma_rho(rho), WeightFamily::geometric(), t, eps);
  const double lead = std::pow(L, rho + 2.0) / std::tgamma(rho + 3.0);
  ExpansionReport rep = assemble(
      t,
      {{"log(t)^(rho+2)/Gamma(rho+3)", lead},
       {"second order: unavailable for fractional rho", 0.0}},
      ref, lead);
  return rep;
}

ExpansionReport expand_negbin_s3_tail(double x) {
  check_tail_x(x);
  const double L = -std::log(x);
  const double ref =
      nu_arrow(SuccessPrior::uniform(), WeightFamily(3), x).value;
  return assemble(x,
                  {{"(1/2) log(1/x)^2", 0.5 * L * L},
                   {"log(1/x) log log(1/x)", L * std::log(L)},
                   {"-gamma log(1/x)", -euler_gamma * L},
                   {"-(1+log 2) log(1/x)", -(1.0 + std::log(2.0)) * L}},
                  ref, std::log(L));
}

ExpansionReport expand_negbin_s3_mean(double t, double eps) {
  check_mean_t(t);
  if (!(t > std::exp(1.0))) {
    throw std::invalid_argument("log log t needs t > e");
  }
  const double L = std::log(t);
  const double ref = phi(SuccessPrior::uniform(), WeightFamily(3), t, eps);
  return assemble(t,
                  {{"(1/2) log(t)^2", 0.5 * L * L},
                   {"log(t) log log(t)", L * std::log(L)},
                   {"-gamma log(t) [tail count]", -euler_gamma * L},
                   {"+gamma log(t) [size-to-threshold]", euler_gamma * L},
                   {"-(1+log 2) log(t)", -(1.0 + std::log(2.0)) * L}},
                  ref, L);
}

double de_haan_estimate(const std::function<double(double)>& tail_fn, double x,
                        double lambda, const std::function<double(double)>& ell) {
  if (!(x > 0.0)) throw std::invalid_argument("x must be positive");
  if (!(lambda > 0.0) || lambda == 1.0) {
    throw std::invalid_argument("lambda must be positive and != 1");
  }
  const double denom = ell(x) * std::log(lambda);
  if (denom == 0.0) throw std::invalid_argument("auxiliary function vanishes");
  return (tail_fn(lambda * x) - tail_fn(x)) / denom;
}

double r_of_x(double x) {
  if (!(x > 1.0)) throw std::invalid_argument("r(x) is used for x > 1");
  auto g = [&](double u) {
    const double fu = f_t(u);
    return std::log1p((x - u) * fu) * fu;
  };
  return integrate_doubling(g, 0.0, x, 5e-9 * x, 1e-9, 64, 1 << 14, 60, 0)
      .value;
}

double r_remainder(double x) { return r_of_x(x) - x * std::log(x) + x; }

}  // namespace gsbp
