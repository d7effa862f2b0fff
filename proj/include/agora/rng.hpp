#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "agora/numeric.hpp"

namespace agora {

// All randomness flows through this one generator so that runs are
// reproducible across platforms: mt19937_64 output is fixed by the standard,
// and the helpers below avoid the implementation-defined std distributions.
using Rng = std::mt19937_64;

inline constexpr const char* rng_algorithm_name = "mt19937_64";

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Independent stream for a worker / policy slot.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

// Uniform in [0,1), 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// The unit draw as an exact dyadic value, for comparisons against exact
// cumulative probabilities.
template <class T>
T uniform_unit_as(Rng& rng) {
  if constexpr (is_exact_v<T>) {
    std::uint64_t k = rng() >> 11;
    return Rational(BigInt(k), BigInt(1) << 53);
  } else {
    return uniform_unit(rng);
  }
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r = rng();
  while (r < threshold) r = rng();
  return r % n;
}

// Fisher-Yates with the unbiased draw above; std::shuffle would not be
// reproducible across standard libraries.
template <class V>
void shuffle_vector(V& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace agora
