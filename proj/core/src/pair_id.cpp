#include "dfp/pair_id.hpp"

#include <cmath>

namespace dfp {

std::pair<Vertex, Vertex> decode_pair(PairId p) {
  const std::uint64_t k = p.value;
  auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  // floating point can land one off in either direction
  while (v * (v - 1) / 2 > k) --v;
  while ((v + 1) * v / 2 <= k) ++v;
  return {static_cast<Vertex>(k - v * (v - 1) / 2), static_cast<Vertex>(v)};
}

}  // namespace dfp
