#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fsc {

/// Seeded generator used everywhere randomness is needed. mt19937_64 output is
/// fixed by the standard; the distribution below is ours, so runs reproduce
/// across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection sampling; n > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace fsc
