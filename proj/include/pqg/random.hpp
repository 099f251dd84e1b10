#pragma once

#include <cstdint>
#include <random>

namespace pqg {

// 64-bit finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Seed for independent stream `stream` under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

using Rng = std::mt19937_64;

// Uniform integer in [0, bound) by rejection; bound > 0. Unlike
// std::uniform_int_distribution the result is the same on every platform.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace pqg
