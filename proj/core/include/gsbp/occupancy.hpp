#pragma once

#include "gsbp/priors.hpp"
#include "gsbp/weights.hpp"

namespace gsbp {

// Expected number of occupied boxes after n multinomial draws,
// E(K_n | p) = sum_j (1 - (1 - w_j)^n), absolute error <= eps.
// n may be any real >= 1; eps must lie in (0, 1e-3].
double expected_Kn_given_p(const WeightFamily& family, SuccessProbability p,
                           double n, double eps = 1e-9);

// Poissonized mean Phi(t | p) = sum_j (1 - e^{-t w_j}), absolute error <= eps.
// Stable up to t = 1e16.
double phi_given_p(const WeightFamily& family, SuccessProbability p, double t,
                   double eps = 1e-9);

// Prior averages over p = e^{-tau}, tau ~ prior; absolute error <= 2 eps.
double expected_Kn(const SuccessPrior& prior, const WeightFamily& family,
                   double n, double eps = 1e-9);
double phi(const SuccessPrior& prior, const WeightFamily& family, double t,
           double eps = 1e-9);

struct PoissonizationGap {
  double gap;    // |E(K_n) - Phi(n)|
  double bound;  // (2/n) Phi(n); gap <= bound + 4 eps
};

PoissonizationGap poissonization_gap(const WeightFamily& family,
                                     SuccessProbability p, double n,
                                     double eps = 1e-9);
PoissonizationGap poissonization_gap(const SuccessPrior& prior,
                                     const WeightFamily& family, double n,
                                     double eps = 1e-9);

}  // namespace gsbp
