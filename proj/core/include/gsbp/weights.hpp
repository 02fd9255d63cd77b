#pragma once

#include <cstdint>

namespace gsbp {

// Success probability of the stick-breaking kernel; strictly inside (0, 1).
class SuccessProbability {
 public:
  explicit SuccessProbability(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// Stick family indexed by the number of rods s >= 2; s = 2 is the geometric
// family, larger s thickens the tail of the round distribution.
class WeightFamily {
 public:
  explicit WeightFamily(int rods);
  static WeightFamily geometric() { return WeightFamily(2); }
  int rods() const { return rods_; }

 private:
  int rods_;
};

// Round-count pmf phi(r) = C(r+s-2, r-1) p^s (1-p)^{r-1}, r >= 1.
double negbin_pmf(const WeightFamily& family, SuccessProbability p,
                  std::int64_t r);

// Box weight w_j = sum_{r>=j} phi(r)/r.  Closed forms for s in {2, 3, 4};
// certified tail summation (relative error <= 1e-12) otherwise.
double weight(const WeightFamily& family, SuccessProbability p,
              std::int64_t j);

// sum_{j>J} w_j.  Closed forms for s in {2, 3, 4}; certified summation
// otherwise.  tail_mass(., ., 0) == 1.
double tail_mass(const WeightFamily& family, SuccessProbability p,
                 std::int64_t J);

}  // namespace gsbp
