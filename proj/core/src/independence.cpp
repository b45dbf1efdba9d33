#include "dfp/independence.hpp"

#include <algorithm>
#include <bit>

#include "dfp/errors.hpp"

namespace dfp {

AdjacencyList blue_subgraph(const ProcessState& state) {
  AdjacencyList g(state.n());
  for (Vertex v = 0; v < state.n(); ++v) {
    for (const Vertex w : state.neighbors(v)) {
      if (!state.is_green(encode_pair(v, w))) g[v].push_back(w);
    }
  }
  return g;
}

std::vector<Vertex> greedy_independent_set(const AdjacencyList& g) {
  const auto n = static_cast<Vertex>(g.size());
  std::vector<std::uint32_t> deg(n);
  std::vector<char> alive(n, 1);
  for (Vertex v = 0; v < n; ++v) deg[v] = static_cast<std::uint32_t>(g[v].size());
  std::vector<Vertex> chosen;
  auto remove = [&](Vertex v) {
    alive[v] = 0;
    for (const Vertex w : g[v]) {
      if (alive[w]) --deg[w];
    }
  };
  for (;;) {
    Vertex best = n;
    for (Vertex v = 0; v < n; ++v) {
      if (alive[v] && (best == n || deg[v] < deg[best])) best = v;
    }
    if (best == n) break;
    chosen.push_back(best);
    remove(best);
    for (const Vertex w : g[best]) {
      if (alive[w]) remove(w);
    }
  }
  return chosen;
}

namespace {

// Max independent set over the candidate mask; branch on a vertex of the
// candidate set, bounded by |current| + popcount(candidates).
void mis_search(const std::vector<std::uint64_t>& nbr, std::uint64_t cand, std::uint32_t size,
                std::uint32_t& best) {
  if (cand == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + static_cast<std::uint32_t>(std::popcount(cand)) <= best) return;
  // a vertex with no candidate neighbours can always be taken
  for (std::uint64_t rest = cand; rest;) {
    const int v = std::countr_zero(rest);
    rest &= rest - 1;
    if ((nbr[v] & cand) == 0) {
      mis_search(nbr, cand & ~(std::uint64_t{1} << v), size + 1, best);
      return;
    }
  }
  const int v = std::countr_zero(cand);
  const std::uint64_t bit = std::uint64_t{1} << v;
  mis_search(nbr, cand & ~bit & ~nbr[v], size + 1, best);
  mis_search(nbr, cand & ~bit, size, best);
}

}  // namespace

std::uint32_t exact_independence_number(const AdjacencyList& g) {
  if (g.size() > 64) throw InvalidParameter("exact_independence_number supports at most 64 vertices");
  std::vector<std::uint64_t> nbr(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (const Vertex w : g[v]) nbr[v] |= std::uint64_t{1} << w;
  }
  const std::uint64_t all = g.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.size()) - 1;
  std::uint32_t best = 0;
  mis_search(nbr, all, 0, best);
  return best;
}

std::uint32_t greedy_blue_independence(const ProcessState& state) {
  return static_cast<std::uint32_t>(greedy_independent_set(blue_subgraph(state)).size());
}

}  // namespace dfp
