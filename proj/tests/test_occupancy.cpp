#include "gsbp/occupancy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gsbp/priors.hpp"
#include "gsbp/random.hpp"

using namespace gsbp;

namespace {

// Weight written out longhand for s in {2, 3, 4}.
double w_inline(int s, double p, double j) {
  const double base = p * std::exp((j - 1.0) * std::log1p(-p));
  if (s == 2) return base;
  if (s == 3) return 0.5 * base * (1.0 + j * p);
  return base * (2.0 + 2.0 * j * p + j * p * p + j * j * p * p) / 6.0;
}

// Kahan-summed reference for both kernels, run far past any truncation the
// library would dare.
double brute_sum(int s, double p, bool poisson, double n, long long jmax) {
  double acc = 0.0, comp = 0.0;
  for (long long j = 1; j <= jmax; ++j) {
    const double w = w_inline(s, p, static_cast<double>(j));
    const double term =
        poisson ? -std::expm1(-n * w) : -std::expm1(n * std::log1p(-w));
    const double t = acc + term;
    comp += (std::fabs(acc) >= std::fabs(term)) ? (acc - t) + term
                                                : (term - t) + acc;
    acc = t;
    if (n * w < 1e-24 && j > 10) break;
  }
  return acc + comp;
}

}  // namespace

TEST_CASE("single draw always occupies exactly one box") {
  for (int s : {2, 3, 4, 5}) {
    for (double pv : {0.05, 0.5, 0.95}) {
      CHECK(expected_Kn_given_p(WeightFamily(s), SuccessProbability(pv), 1.0) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  for (const SuccessPrior& prior :
       {SuccessPrior::uniform(), SuccessPrior::log_gamma(2)}) {
    CHECK(expected_Kn(prior, WeightFamily::geometric(), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("two draws, fair coin: 2 - sum of squared weights = 5/3") {
  CHECK(expected_Kn_given_p(WeightFamily::geometric(), SuccessProbability(0.5),
                            2.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("direct path matches the brute sum") {
  for (int s : {2, 3, 4}) {
    for (double pv : {0.1, 0.45, 0.9}) {
      for (double n : {7.0, 100.0, 54321.0}) {
        const double lib =
            expected_Kn_given_p(WeightFamily(s), SuccessProbability(pv), n);
        CHECK(lib ==
              doctest::Approx(brute_sum(s, pv, false, n, 100000)).epsilon(5e-11));
      }
      const double libp =
          phi_given_p(WeightFamily(s), SuccessProbability(pv), 1e10);
      CHECK(libp ==
            doctest::Approx(brute_sum(s, pv, true, 1e10, 400000)).epsilon(5e-11));
    }
  }
}

TEST_CASE("staircase path matches the brute sum at small p") {
  // span/|log q| > 60000 here, so the Euler-Maclaurin route is exercised.
  for (int s : {2, 3, 4}) {
    const double pv = 5e-4;
    const double direct = brute_sum(s, pv, false, 1000.0, 400000);
    const double lib =
        expected_Kn_given_p(WeightFamily(s), SuccessProbability(pv), 1000.0);
    CHECK(std::fabs(lib - direct) <= 3e-9);
    const double directp = brute_sum(s, pv, true, 1e8, 400000);
    const double libp = phi_given_p(WeightFamily(s), SuccessProbability(pv), 1e8);
    CHECK(std::fabs(libp - directp) <= 3e-9);
  }
}

TEST_CASE("two evaluation paths agree across the seam") {
  // Just either side of the direct-cap boundary the results must still agree
  // to the certified budgets.
  for (double pv : {7.2e-4, 6.2e-4, 5.6e-4}) {
    const double a =
        expected_Kn_given_p(WeightFamily(3), SuccessProbability(pv), 2500.0);
    const double b = brute_sum(3, pv, false, 2500.0, 400000);
    CHECK(std::fabs(a - b) <= 3e-9);
  }
}

TEST_CASE("tiny p saturates to n distinct boxes") {
  const double v =
      expected_Kn_given_p(WeightFamily::geometric(), SuccessProbability(1e-12),
                          1000.0);
  CHECK(v == doctest::Approx(1000.0).epsilon(1e-9));
  // second-order depletion must show up at larger n p
  const double v2 = expected_Kn_given_p(WeightFamily::geometric(),
                                        SuccessProbability(1e-7), 1e6, 1e-6);
  CHECK(v2 < 1e6);
  CHECK(v2 > 0.9e6);
}

TEST_CASE("halving eps moves the value by less than eps") {
  const WeightFamily fam(3);
  for (double eps : {1e-6, 1e-9}) {
    const double a = expected_Kn_given_p(fam, SuccessProbability(3e-4), 500.0, eps);
    const double b =
        expected_Kn_given_p(fam, SuccessProbability(3e-4), 500.0, 0.5 * eps);
    CHECK(std::fabs(a - b) <= eps);
    const double c = expected_Kn(SuccessPrior::uniform(), fam, 200.0, eps);
    const double d = expected_Kn(SuccessPrior::uniform(), fam, 200.0, 0.5 * eps);
    CHECK(std::fabs(c - d) <= 2.0 * eps);
  }
}

TEST_CASE("prior average agrees with an independent fixed-panel route") {
  for (const SuccessPrior& prior :
       {SuccessPrior::uniform(), SuccessPrior::log_gamma(1)}) {
    for (int s : {2, 3}) {
      const WeightFamily fam(s);
      const double n = 200.0;
      const auto nodes = log_coordinate_quadrature(prior, 70.0, 700);
      double oracle = 0.0;
      for (const QuadNode& q : nodes) {
        const double pv = std::exp(-q.t);
        if (pv >= 1.0 || pv <= 0.0) continue;
        oracle +=
            expected_Kn_given_p(fam, SuccessProbability(pv), n, 1e-10) * q.weight;
      }
      const double lib = expected_Kn(prior, fam, n);
      CHECK(lib == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("prior average sits inside the Monte Carlo band over p") {
  const SuccessPrior prior = SuccessPrior::uniform();
  const WeightFamily fam = WeightFamily::geometric();
  RandomStream rng(5150u);
  const int reps = 60000;
  double acc = 0.0, accsq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double e =
        expected_Kn_given_p(fam, prior.sample_p(rng), 50.0, 1e-7);
    acc += e;
    accsq += e * e;
  }
  const double mean = acc / reps;
  const double se =
      std::sqrt((accsq / reps - mean * mean) / static_cast<double>(reps - 1));
  CHECK(std::fabs(expected_Kn(prior, fam, 50.0) - mean) <= 4.0 * se);
}

TEST_CASE("Poissonization gap respects the certified bound") {
  const double eps = 1e-7;
  for (double pv : {0.1, 0.5, 0.9}) {
    for (int s : {2, 3}) {
      for (double n : {10.0, 1000.0, 100000.0}) {
        const PoissonizationGap g =
            poissonization_gap(WeightFamily(s), SuccessProbability(pv), n, eps);
        CHECK(g.gap <= g.bound + 4.0 * eps);
      }
    }
  }
  const PoissonizationGap g = poissonization_gap(
      SuccessPrior::log_gamma(1), WeightFamily::geometric(), 1000.0, eps);
  CHECK(g.gap <= g.bound + 4.0 * eps);
}

TEST_CASE("input validation") {
  const WeightFamily fam = WeightFamily::geometric();
  const SuccessProbability p(0.5);
  CHECK_THROWS_AS(expected_Kn_given_p(fam, p, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(expected_Kn_given_p(fam, p, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(expected_Kn_given_p(fam, p, 10.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(phi_given_p(fam, p, 2e16), std::invalid_argument);
  CHECK_THROWS_AS(phi_given_p(fam, p, 0.0), std::invalid_argument);
  // s >= 5 has no staircase; deep small-p configurations must refuse loudly.
  CHECK_THROWS_AS(
      expected_Kn_given_p(WeightFamily(5), SuccessProbability(1e-6), 1e6),
      std::runtime_error);
}
