#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hdrtrain {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). Every
// output block is a pure function of (key, counter), so per-element streams
// can be generated in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);

  static Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }
};

// Random values addressed by (seed, index, stream). Identical addresses always
// yield identical values.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(Philox4x32::key_from_seed(seed)) {}

  // Two independent uniforms in [0, 1) with 53-bit resolution.
  std::array<double, 2> uniform2(std::uint64_t index, std::uint32_t stream = 0) const;
  double uniform(std::uint64_t index, std::uint32_t stream = 0) const {
    return uniform2(index, stream)[0];
  }
  // Standard normal via Box-Muller on uniform2(index, stream).
  double normal(std::uint64_t index, std::uint32_t stream = 0) const;

 private:
  Philox4x32::Key key_;
};

// Derives a child seed from a parent seed and a label (FNV-1a + SplitMix64
// finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t value);

// Deterministic Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace hdrtrain
