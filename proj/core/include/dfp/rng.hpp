#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dfp {

/// The process generator. std::mt19937_64 is bit-exact across standard
/// libraries; bounded draws go through uniform_below rather than
/// std::uniform_int_distribution, whose output is implementation-defined.
using Rng = std::mt19937_64;
__extension__ using Uint128 = unsigned __int128;

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/lemire-bounded";

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
/// bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  Uint128 m = static_cast<Uint128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<Uint128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// SplitMix64 finaliser, used to derive independent auxiliary streams
/// (probe selection, codegree sampling) from a run seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace dfp
