#pragma once

#include <cmath>
#include <cstdint>

namespace chaoslab::rng {

// Counter-based random streams: every draw is a pure function of
// (seed, stream index), so fields and replicas are reproducible under
// any evaluation order or thread count.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// 64 random bits for stream index `i` of stream family `seed`.
inline std::uint64_t bits(std::uint64_t seed, std::uint64_t i) {
  return splitmix64(splitmix64(seed) ^ splitmix64(i ^ 0xd1b54a32d192ed03ull));
}

/// Derive an independent child seed (replica streams, sub-experiments).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t child) {
  return splitmix64(master ^ splitmix64(child * kGolden + 1));
}

/// Uniform on (0,1), strictly positive.
inline double u01(std::uint64_t seed, std::uint64_t i) {
  return (static_cast<double>(bits(seed, i) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter substreams.
inline double normal(std::uint64_t seed, std::uint64_t i) {
  const double u1 = u01(seed, 2 * i);
  const double u2 = u01(seed, 2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Fair +-1 draw.
inline double rademacher(std::uint64_t seed, std::uint64_t i) {
  return (bits(seed, i) & 1ull) ? 1.0 : -1.0;
}

}  // namespace chaoslab::rng
