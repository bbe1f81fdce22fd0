#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace posdiv::rng {

// All randomness flows through std::mt19937_64 plus the helpers below, so a
// given seed produces identical output on every platform. The name is
// recorded in run manifests.
inline constexpr const char* kAlgorithmName = "mt19937_64+fisher-yates";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

// Substream seed for (global seed, key). Keys map to independent streams
// regardless of the order in which they are processed.
inline std::uint64_t derive_stream_seed(std::uint64_t global_seed,
                                        std::string_view key) {
  return splitmix64(splitmix64(global_seed) ^ fnv1a64(key));
}

// Uniform draw from [0, n) by masked rejection. std::uniform_int_distribution
// is implementation-defined and cannot be used for reproducible output.
inline std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n) {
  if (n < 2) return 0;
  const std::uint64_t mask = std::bit_ceil(n) - 1;
  for (;;) {
    const std::uint64_t v = engine() & mask;
    if (v < n) return v;
  }
}

// Fisher-Yates over the slice [first, last) of an index vector.
inline void fisher_yates(std::mt19937_64& engine,
                         std::vector<std::size_t>& indices, std::size_t first,
                         std::size_t last) {
  for (std::size_t i = last - first; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(engine, i));
    std::swap(indices[first + i - 1], indices[first + j]);
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double canonical(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace posdiv::rng
