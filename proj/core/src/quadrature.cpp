#include "gsbp/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace gsbp {

GaussLegendre::GaussLegendre(int order) {
  if (order < 2 || order > 256)
    throw std::invalid_argument("GaussLegendre: order out of range");
  node_.resize(order);
  weight_.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    node_[i] = -x;
    node_[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weight_[i] = w;
    weight_[order - 1 - i] = w;
  }
}

const GaussLegendre& GaussLegendre::order16() {
  static const GaussLegendre rule(16);
  return rule;
}

const GaussLegendre& GaussLegendre::order20() {
  static const GaussLegendre rule(20);
  return rule;
}

}  // namespace gsbp
