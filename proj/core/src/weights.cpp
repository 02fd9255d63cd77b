#include "gsbp/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsbp {

SuccessProbability::SuccessProbability(double value) : value_(value) {
  if (!(value > 0.0) || !(value < 1.0)) {
    throw std::invalid_argument("success probability must lie in (0, 1), got " +
                                std::to_string(value));
  }
}

WeightFamily::WeightFamily(int rods) : rods_(rods) {
  if (rods < 2) {
    throw std::invalid_argument("weight family needs at least 2 rods, got " +
                                std::to_string(rods));
  }
}

namespace {

// q^k as exp(k log1p(-p)); underflows cleanly to 0 for huge k.
double q_pow(double p, double k) { return std::exp(k * std::log1p(-p)); }

// First summand of a tail sum started at r, in log space.
double log_negbin_pmf(int s, double p, double r) {
  return std::lgamma(r + s - 1.0) - std::lgamma(r) - std::lgamma(double(s)) +
         s * std::log(p) + (r - 1.0) * std::log1p(-p);
}

}  // namespace

double negbin_pmf(const WeightFamily& family, SuccessProbability p,
                  std::int64_t r) {
  if (r < 1) return 0.0;
  const int s = family.rods();
  const double pv = p.value();
  if (r == 1) return std::pow(pv, s);
  return std::exp(log_negbin_pmf(s, pv, double(r)));
}

double weight(const WeightFamily& family, SuccessProbability p,
              std::int64_t j) {
  if (j < 1) throw std::invalid_argument("box index must be >= 1");
  const int s = family.rods();
  const double pv = p.value();
  const double q = 1.0 - pv;
  const double jd = double(j);
  const double base = pv * q_pow(pv, jd - 1.0);
  switch (s) {
    case 2:
      return base;
    case 3:
      return base * (1.0 + jd * pv) / 2.0;
    case 4:
      return base *
             (2.0 + 2.0 * jd * pv + jd * pv * pv + jd * jd * pv * pv) / 6.0;
    default:
      break;
  }
  // w_j = sum_{r>=j} phi(r)/r via the pmf ratio phi(r+1)/phi(r)
  // = ((r+s-1)/r) q.  Ratios decrease in r, so once below 1 the remaining
  // tail is bounded by a geometric series and the stop is certified.
  double phi = std::exp(log_negbin_pmf(s, pv, jd));
  if (phi == 0.0) return 0.0;
  double r = jd;
  double sum = 0.0;
  for (;;) {
    sum += phi / r;
    const double ratio = (r + s - 1.0) / r * q;
    if (ratio < 1.0) {
      const double bound = phi * ratio / (1.0 - ratio) / r;
      if (bound <= 1e-15 * sum) break;
    }
    phi *= ratio;
    r += 1.0;
    if (r > 1e9) throw std::runtime_error("weight tail sum failed to converge");
  }
  return sum;
}

double tail_mass(const WeightFamily& family, SuccessProbability p,
                 std::int64_t J) {
  if (J < 0) throw std::invalid_argument("box count must be >= 0");
  if (J == 0) return 1.0;
  const int s = family.rods();
  const double pv = p.value();
  const double q = 1.0 - pv;
  const double Jd = double(J);
  const double qJ = q_pow(pv, Jd);
  switch (s) {
    case 2:
      return qJ;
    case 3:
      return qJ * (2.0 + Jd * pv) / 2.0;
    case 4: {
      const double a = (Jd + 1.0) * pv;
      return qJ / 6.0 *
             (2.0 + (2.0 + pv) * (a + q) +
              (a * a + 2.0 * a * q + q * (1.0 + q)));
    }
    default:
      break;
  }
  // sum_{j>J} w_j = sum_{r>J} phi(r) (1 - J/r): a single positive-term sum
  // with the same certified geometric stop as weight().
  double phi = std::exp(log_negbin_pmf(s, pv, Jd + 1.0));
  if (phi == 0.0) return 0.0;
  double r = Jd + 1.0;
  double sum = 0.0;
  for (;;) {
    sum += phi * (1.0 - Jd / r);
    const double ratio = (r + s - 1.0) / r * q;
    if (ratio < 1.0) {
      const double bound = phi * ratio / (1.0 - ratio);
      if (bound <= 1e-15 * sum && sum > 0.0) break;
    }
    phi *= ratio;
    r += 1.0;
    if (r > 1e9)
      throw std::runtime_error("tail mass sum failed to converge");
  }
  return sum;
}

}  // namespace gsbp
