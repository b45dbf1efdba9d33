#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <utility>

namespace dfp {

using Vertex = std::uint32_t;

/// Canonical index of an unordered vertex pair {u, v}.
///
/// For u < v the index is v(v-1)/2 + u, which enumerates the pairs of [n]
/// as 0 .. n(n-1)/2 - 1 independently of n. Ascending PairId is the canonical
/// open-set ordering used by the lockstep tests.
struct PairId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(PairId, PairId) = default;
};

/// Largest n whose pair count fits in a 32-bit PairId.
inline constexpr Vertex kMaxVertices = 92682;

constexpr std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

constexpr PairId encode_pair(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return PairId{static_cast<std::uint32_t>(std::uint64_t{v} * (v - 1) / 2 + u)};
}

/// Inverse of encode_pair; returns (min, max).
std::pair<Vertex, Vertex> decode_pair(PairId p);

}  // namespace dfp

template <>
struct std::hash<dfp::PairId> {
  std::size_t operator()(dfp::PairId p) const noexcept { return std::hash<std::uint32_t>{}(p.value); }
};
