#pragma once

#include <cstdint>
#include <random>

namespace mtd {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream splitting: (seed, stream) -> independent generator.
// Micrographs can be synthesized in parallel with per-index streams.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t stream) {
  uint64_t s = seed;
  uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  uint64_t b = splitmix64(s);
  uint64_t c = splitmix64(s);
  return std::mt19937_64(b ^ (c << 1));
}

}  // namespace mtd
