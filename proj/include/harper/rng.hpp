#pragma once

#include <cstdint>
#include <random>

namespace harper {

// Deterministic sampling helpers. std::uniform_int_distribution is
// implementation-defined, so bounded draws are done by hand to keep
// artifacts byte-identical across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t n) {
  // n == 0 means the full 64-bit range.
  if (n == 0) return rng();
  return rng() % n;
}

inline std::int64_t uniform_range(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_u64(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace harper
