#include "gsbp/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace gsbp {

namespace {

constexpr std::int64_t kIndexCap = std::int64_t{4} << 60;

// Geometric failure count floor(log U / log(1-p)), capped against overflow.
std::int64_t geometric_failures(double p, RandomStream& rng) {
  const double v = std::log(rng.next_double()) / std::log1p(-p);
  if (v >= static_cast<double>(kIndexCap)) return kIndexCap;
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t sample_box_index(const WeightFamily& family, SuccessProbability p,
                              RandomStream& rng) {
  std::int64_t r = 1;
  for (int i = 0; i < family.rods(); ++i) {
    r += geometric_failures(p.value(), rng);
    if (r >= kIndexCap) {
      r = kIndexCap;
      break;
    }
  }
  const std::int64_t j =
      1 + static_cast<std::int64_t>(rng.next_double() * static_cast<double>(r));
  return j > r ? r : j;
}

std::int64_t sample_box_index_geometric_direct(SuccessProbability p,
                                               RandomStream& rng) {
  return 1 + geometric_failures(p.value(), rng);
}

std::int64_t sample_Kn(const SuccessPrior& prior, const WeightFamily& family,
                       std::int64_t n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  const SuccessProbability p = prior.sample_p(rng);
  std::unordered_set<std::int64_t> seen;
  seen.reserve(static_cast<std::size_t>(n < 1024 ? n : 1024));
  for (std::int64_t i = 0; i < n; ++i) {
    seen.insert(sample_box_index(family, p, rng));
  }
  return static_cast<std::int64_t>(seen.size());
}

McResult mc_mean_Kn(const McConfig& config) {
  if (config.reps < 1 || config.reps > 1000000000) {
    throw std::invalid_argument("reps must lie in [1, 1e9]");
  }
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t r = 0; r < config.reps; ++r) {
    RandomStream rs = RandomStream::substream(config.seed, static_cast<std::uint64_t>(r));
    const double k = static_cast<double>(
        sample_Kn(config.prior, config.family, config.n, rs));
    sum += k;
    sumsq += k * k;
  }
  const double reps = static_cast<double>(config.reps);
  const double mean = sum / reps;
  double se = 0.0;
  if (config.reps > 1) {
    const double var = std::max(0.0, (sumsq - reps * mean * mean) / (reps - 1.0));
    se = std::sqrt(var / reps);
  }
  return McResult{mean, se, config.reps, config.seed};
}

}  // namespace gsbp
