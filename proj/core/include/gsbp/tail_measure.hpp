#pragma once

#include <cstdint>

#include "gsbp/priors.hpp"
#include "gsbp/weights.hpp"

namespace gsbp {

enum class TailMethod { ClosedForm, LambertW, Scan, Quadrature };

struct TailCount {
  double value;
  TailMethod method;
};

// Number of indices j with w_j(p) >= x (ties count), 0 when w_1(p) < x.
// s=2 uses the geometric floor formula, s=3 inverts through Lambert W,
// larger s falls back to the scan.
TailCount nu_arrow_given_p(const WeightFamily& family, SuccessProbability p,
                           double x);

// Reference count by walking the strictly decreasing weight sequence.
std::int64_t nu_arrow_scan(const WeightFamily& family, SuccessProbability p,
                           double x);

// Continuous index m >= 0 solving p(1-p)^m (1+p+pm)/2 = x, i.e. the s=3
// weight at fractional index m+1 equals x.  Requires w_1(p) >= x.  When the
// Lambert argument underflows to zero the fixed-point scheme takes over.
double m_given_p_s3(double x, SuccessProbability p);

// k steps of the fixed-point scheme
//   m_k = log(x/p)/log(1-p) - log((1+p+p m_{k-1})/2)/log(1-p)
// started from the geometric solution m_1 = log(x/p)/log(1-p).
double m_iterative_s3(double x, SuccessProbability p, int k);

// Lower edge of {p : w_1(p) >= x} for s=3: the root of u(1+u)/2 = x,
// evaluated in the cancellation-free form 4x/(1+sqrt(1+8x)); x <= u <= 2x.
double x_tilde(double x);

// Prior average of nu_arrow_given_p; relative error <= 1e-6.  s in {2,3}.
TailCount nu_arrow(const SuccessPrior& prior, const WeightFamily& family,
                   double x);

// Smooth surrogate: prior integral of the continuous index over
// {p : w_1(p) >= x}; satisfies m_of_x(x) <= nu_arrow(x) <= m_of_x(x) + 1.
// Relative error <= 1e-6.  s in {2,3}.
double m_of_x(const SuccessPrior& prior, const WeightFamily& family, double x);

}  // namespace gsbp
