#pragma once

#include <string>
#include <vector>

#include "gsbp/random.hpp"
#include "gsbp/weights.hpp"

namespace gsbp {

enum class PriorKind { Uniform, LogGamma, LogGammaRho };

// Prior on the success probability.  In the t = log(1/p) coordinate all
// three kinds are gamma(shape, 1) laws: Uniform has shape 1, LogGamma(m)
// has shape m+1, LogGammaRho(rho) has shape 1+rho with rho > -1.
class SuccessPrior {
 public:
  static SuccessPrior uniform();
  static SuccessPrior log_gamma(int m);
  static SuccessPrior log_gamma_rho(double rho);

  PriorKind kind() const { return kind_; }
  // Gamma shape of t = log(1/p).
  double shape() const { return shape_; }
  int m() const;
  double rho() const;
  std::string label() const;

  // Density of p on (0,1): 1, (-log p)^m / m!, or (-log p)^rho / Gamma(1+rho).
  double density(SuccessProbability p) const;
  // Density of t = log(1/p) on (0, inf): t^{shape-1} e^{-t} / Gamma(shape).
  double density_t(double t) const;
  // P(T > t); used for certified truncation of t-integrals.
  double survival_t(double t) const;
  // Smallest T with survival_t(T) <= eps.
  double truncation_time(double eps) const;

  SuccessProbability sample_p(RandomStream& rng) const;

 private:
  SuccessPrior(PriorKind kind, double shape) : kind_(kind), shape_(shape) {}
  PriorKind kind_;
  double shape_;
};

struct QuadNode {
  double t;
  double weight;  // quadrature weight times density_t(t)
};

// Panel-composite Gauss-Legendre nodes on [0, T] with the prior's t-density
// folded into the weights: sum g(t_i) weight_i approximates
// integral_0^T g(t) pi(e^{-t}) e^{-t} dt.
std::vector<QuadNode> log_coordinate_quadrature(const SuccessPrior& prior,
                                                double T, int panels);

}  // namespace gsbp
