#include "gsbp/priors.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gsbp/random.hpp"

using namespace gsbp;

TEST_CASE("uniform prior in both coordinates") {
  const SuccessPrior u = SuccessPrior::uniform();
  CHECK(u.shape() == 1.0);
  CHECK(u.label() == "uniform");
  CHECK(u.density(SuccessProbability(0.37)) == 1.0);
  CHECK(u.density_t(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(u.survival_t(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(u.truncation_time(1e-9) == doctest::Approx(9.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("log-gamma prior densities") {
  const SuccessPrior g2 = SuccessPrior::log_gamma(2);
  CHECK(g2.m() == 2);
  CHECK(g2.shape() == 3.0);
  // (-log p)^2 / 2! at p = e^{-3} is 4.5.
  CHECK(g2.density(SuccessProbability(std::exp(-3.0))) ==
        doctest::Approx(4.5).epsilon(1e-13));
  CHECK(g2.density_t(3.0) ==
        doctest::Approx(9.0 * std::exp(-3.0) / 2.0).epsilon(1e-13));
  // Integer shape survival has the closed Poisson form.
  for (double t : {0.5, 2.0, 8.0, 30.0}) {
    const double oracle = std::exp(-t) * (1.0 + t + 0.5 * t * t);
    CHECK(g2.survival_t(t) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK_THROWS_AS(SuccessPrior::log_gamma(-1), std::invalid_argument);
}

TEST_CASE("fractional shape prior") {
  const SuccessPrior r = SuccessPrior::log_gamma_rho(0.5);
  CHECK(r.rho() == doctest::Approx(0.5));
  CHECK(r.shape() == doctest::Approx(1.5));
  const double t = 1.7;
  CHECK(r.density_t(t) ==
        doctest::Approx(std::sqrt(t) * std::exp(-t) / std::tgamma(1.5))
            .epsilon(1e-13));
  CHECK_THROWS_AS(SuccessPrior::log_gamma_rho(-1.0), std::invalid_argument);
}

TEST_CASE("truncation time inverts the survival function") {
  for (double eps : {1e-3, 1e-6, 1e-12}) {
    for (const SuccessPrior& pr :
         {SuccessPrior::uniform(), SuccessPrior::log_gamma(1),
          SuccessPrior::log_gamma_rho(2.5)}) {
      const double T = pr.truncation_time(eps);
      CHECK(pr.survival_t(T) == doctest::Approx(eps).epsilon(1e-9));
    }
  }
}

TEST_CASE("sampled p matches prior moments") {
  RandomStream rng(20240817u);
  const int reps = 200000;
  SUBCASE("uniform: mean 1/2") {
    const SuccessPrior pr = SuccessPrior::uniform();
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += pr.sample_p(rng).value();
    // sd of the mean is (1/sqrt(12))/sqrt(reps) ~ 6.5e-4
    CHECK(std::fabs(acc / reps - 0.5) < 4e-3);
  }
  SUBCASE("log-gamma(1): mean of p is 1/4") {
    const SuccessPrior pr = SuccessPrior::log_gamma(1);
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += pr.sample_p(rng).value();
    CHECK(std::fabs(acc / reps - 0.25) < 4e-3);
  }
}

TEST_CASE("log-coordinate quadrature integrates against the t-density") {
  const SuccessPrior pr = SuccessPrior::log_gamma(1);
  const double T = 40.0;
  const auto nodes = log_coordinate_quadrature(pr, T, 48);
  double total = 0.0, first = 0.0;
  for (const QuadNode& q : nodes) {
    total += q.weight;
    first += q.t * q.weight;
  }
  // integral t e^{-t} dt over (0, inf) is 1; first moment of shape-2 gamma is 2.
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(first == doctest::Approx(2.0).epsilon(1e-9));
}
