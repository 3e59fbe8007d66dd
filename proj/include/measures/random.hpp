#pragma once

#include <cstdint>

namespace measures {

// Counter-based 64-bit generator.
//
// Output i of stream `key` is the SplitMix64 finalizer applied to
// key + (i + 1) * 0x9E3779B97F4A7C15. The generator holds only (key, counter),
// so any position is reachable in O(1) and results are identical on every
// platform with IEEE-754 doubles.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal via the Box-Muller transform of two uniforms.
  double normal();
  // Gamma(shape, 1) by Marsaglia-Tsang squeeze.
  double gamma(double shape);
  // Poisson(rate): inversion for rate <= 30, PTRS rejection above.
  std::int64_t poisson(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

// Independent child seed number `index` of `seed`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace measures
