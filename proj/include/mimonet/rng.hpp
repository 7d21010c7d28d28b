#pragma once

// Counter-based seeding: every (master seed, realization index, stream) triple
// maps to an independent engine, so results never depend on how the index
// range is split across workers.

#include <cstdint>
#include <random>

namespace mimonet {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) {
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  return splitmix64(x ^ splitmix64(stream * 0xD1B54A32D192ED03ULL + 1));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

}  // namespace mimonet
