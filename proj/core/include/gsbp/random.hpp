#pragma once

#include <cstdint>

namespace gsbp {

// SplitMix64 stream.  Satisfies UniformRandomBitGenerator, so standard
// distributions apply.  Substreams are derived by hashing (seed, index),
// never by sequential state handoff, so replicate r is reproducible no
// matter how replicates are scheduled.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(mix(mix(seed) + index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    return finalize(state_);
  }

  // Uniform on the open interval (0,1); zero is rejected so that log(u)
  // is always finite.
  double next_double() {
    for (;;) {
      const double u = double((*this)() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t z) {
    return finalize(z + 0x9E3779B97F4A7C15ull);
  }

  std::uint64_t state_;
};

}  // namespace gsbp
