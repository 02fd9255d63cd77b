#include "gsbp/priors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "gsbp/quadrature.hpp"

namespace gsbp {

SuccessPrior SuccessPrior::uniform() {
  return SuccessPrior(PriorKind::Uniform, 1.0);
}

SuccessPrior SuccessPrior::log_gamma(int m) {
  if (m < 0) throw std::invalid_argument("LogGamma order must be >= 0");
  return SuccessPrior(PriorKind::LogGamma, double(m) + 1.0);
}

SuccessPrior SuccessPrior::log_gamma_rho(double rho) {
  if (!(rho > -1.0))
    throw std::invalid_argument("LogGammaRho index must exceed -1");
  return SuccessPrior(PriorKind::LogGammaRho, 1.0 + rho);
}

int SuccessPrior::m() const {
  if (kind_ != PriorKind::LogGamma)
    throw std::logic_error("m() is defined only for LogGamma priors");
  return int(shape_ - 1.0 + 0.5);
}

double SuccessPrior::rho() const {
  if (kind_ != PriorKind::LogGammaRho)
    throw std::logic_error("rho() is defined only for LogGammaRho priors");
  return shape_ - 1.0;
}

std::string SuccessPrior::label() const {
  switch (kind_) {
    case PriorKind::Uniform:
      return "uniform";
    case PriorKind::LogGamma:
      return "loggamma:" + std::to_string(m());
    case PriorKind::LogGammaRho:
      return "rho:" + std::to_string(shape_ - 1.0);
  }
  return "?";
}

double SuccessPrior::density(SuccessProbability p) const {
  const double t = -std::log(p.value());
  switch (kind_) {
    case PriorKind::Uniform:
      return 1.0;
    case PriorKind::LogGamma:
    case PriorKind::LogGammaRho:
      return std::pow(t, shape_ - 1.0) / std::tgamma(shape_);
  }
  return 0.0;
}

double SuccessPrior::density_t(double t) const {
  if (!(t > 0.0)) {
    // t = 0 is an integrable boundary; return the limit where it exists.
    if (shape_ == 1.0) return 1.0;
    return shape_ > 1.0 ? 0.0
                        : std::numeric_limits<double>::infinity();
  }
  if (kind_ == PriorKind::Uniform) return std::exp(-t);
  return std::pow(t, shape_ - 1.0) * std::exp(-t) / std::tgamma(shape_);
}

double SuccessPrior::survival_t(double t) const {
  if (t <= 0.0) return 1.0;
  if (kind_ == PriorKind::Uniform) return std::exp(-t);
  return boost::math::gamma_q(shape_, t);
}

double SuccessPrior::truncation_time(double eps) const {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("truncation tolerance must lie in (0,1)");
  if (kind_ == PriorKind::Uniform) return -std::log(eps);
  return boost::math::gamma_q_inv(shape_, eps);
}

SuccessProbability SuccessPrior::sample_p(RandomStream& rng) const {
  for (;;) {
    double p;
    if (kind_ == PriorKind::Uniform) {
      p = rng.next_double();
    } else {
      std::gamma_distribution<double> gamma(shape_, 1.0);
      p = std::exp(-gamma(rng));
    }
    if (p > 0.0 && p < 1.0) return SuccessProbability(p);
  }
}

std::vector<QuadNode> log_coordinate_quadrature(const SuccessPrior& prior,
                                                double T, int panels) {
  if (!(T > 0.0)) throw std::invalid_argument("upper limit must be positive");
  if (panels < 1) throw std::invalid_argument("need at least one panel");
  const GaussLegendre& rule = GaussLegendre::order20();
  std::vector<QuadNode> nodes;
  nodes.reserve(std::size_t(panels) * rule.nodes().size());
  const double h = T / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = k * h;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
      const double t = mid + half * rule.nodes()[i];
      nodes.push_back({t, half * rule.weights()[i] * prior.density_t(t)});
    }
  }
  return nodes;
}

}  // namespace gsbp
