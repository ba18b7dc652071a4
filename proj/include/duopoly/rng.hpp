#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace duopoly {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to turn (master seed, counters...) into independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream derivation: the same (master, counters) always yields the same seed,
/// independent of how many other streams were derived before it.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> counters) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double uniform(Rng& rng, double lo, double hi) {
  return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double normal(Rng& rng, double sd) {
  return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0;
}

}  // namespace duopoly
