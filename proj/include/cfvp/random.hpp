#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace cfvp {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used only to derive well-separated seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-streams of one run seed.
enum class Stream : std::uint64_t {
  kTopology = 1,
  kEpidemic = 2,
  kIdentification = 3,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  return Rng{mix64(seed ^ mix64(static_cast<std::uint64_t>(stream)))};
}

// Seed of realization `r` at the grid point whose swept parameter is `param`.
//   seed = mix64(mix64(master ^ mix64(bits(param))) + r)
// The derivation ignores layer degrees, so configurations that differ only
// in <k_A> or <k_B> share random numbers realization by realization.
inline std::uint64_t realization_seed(std::uint64_t master, double param,
                                      std::uint64_t r) {
  const auto bits = std::bit_cast<std::uint64_t>(param == 0.0 ? 0.0 : param);
  return mix64(mix64(master ^ mix64(bits)) + r);
}

}  // namespace cfvp
