#pragma once

#include <cstdint>

#include "gsbp/priors.hpp"
#include "gsbp/random.hpp"
#include "gsbp/weights.hpp"

namespace gsbp {

// One box index with P(j) = w_j(p): draw the shifted negative binomial rod
// count r as 1 plus the failures before the s-th success (s geometric runs),
// then pick uniformly in {1, ..., r}.
std::int64_t sample_box_index(const WeightFamily& family, SuccessProbability p,
                              RandomStream& rng);

// Direct geometric inversion, kept separate as an oracle for the composition.
std::int64_t sample_box_index_geometric_direct(SuccessProbability p,
                                               RandomStream& rng);

// Number of distinct boxes hit by n draws after sampling p from the prior.
std::int64_t sample_Kn(const SuccessPrior& prior, const WeightFamily& family,
                       std::int64_t n, RandomStream& rng);

struct McConfig {
  std::int64_t n;
  std::int64_t reps;
  std::uint64_t seed;
  SuccessPrior prior;
  WeightFamily family;
};

struct McResult {
  double mean_Kn;
  double std_error;
  std::int64_t reps;
  std::uint64_t seed;
};

// Mean of sample_Kn over config.reps replicates.  Replicate r uses the
// substream (seed, r) and results reduce in replicate order, so the output is
// bitwise identical across reruns regardless of scheduling.
McResult mc_mean_Kn(const McConfig& config);

}  // namespace gsbp
