#include "dfp/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dfp/errors.hpp"

namespace dfp::oracle {

NaiveGraph::NaiveGraph(Vertex n, std::vector<PairId> edges) : n_(n), adj_(std::size_t{n} * n, 0) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const PairId e : edges) {
    const auto [u, v] = decode_pair(e);
    if (v >= n) throw InvalidInput("edge endpoint out of range");
    adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
  }
  edges_ = std::move(edges);
}

NaiveGraph NaiveGraph::from_state(const ProcessState& state) { return NaiveGraph(state.n(), state.edges()); }

std::size_t NaiveGraph::codegree(Vertex u, Vertex v) const {
  std::size_t c = 0;
  for (Vertex w = 0; w < n_; ++w) c += has_edge(u, w) && has_edge(v, w);
  return c;
}

std::vector<Vertex> NaiveGraph::common_neighbors(Vertex u, Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex w = 0; w < n_; ++w) {
    if (has_edge(u, w) && has_edge(v, w)) out.push_back(w);
  }
  return out;
}

void NaiveGraph::add_edge(Vertex u, Vertex v) {
  const PairId e = encode_pair(u, v);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it != edges_.end() && *it == e) return;
  edges_.insert(it, e);
  adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
}

NaiveGraph NaiveGraph::with_edge(Vertex u, Vertex v) const {
  NaiveGraph g = *this;
  g.add_edge(u, v);
  return g;
}

bool is_diamond_free(const NaiveGraph& g) {
  for (const PairId e : g.edges()) {
    const auto [u, v] = decode_pair(e);
    if (g.codegree(u, v) > 1) return false;
  }
  return true;
}

std::vector<PairState> naive_classify_all(const NaiveGraph& g) {
  if (!is_diamond_free(g)) throw InvalidInput("naive_classify_all: graph contains a diamond");
  std::vector<PairState> table(pair_count(g.n()));
  for (std::uint32_t p = 0; p < table.size(); ++p) {
    const auto [u, v] = decode_pair(PairId{p});
    const std::size_t c = g.codegree(u, v);
    if (g.has_edge(u, v)) {
      table[p] = c == 0 ? PairState::E0 : PairState::E1;
    } else if (!is_diamond_free(g.with_edge(u, v))) {
      table[p] = PairState::C;
    } else {
      table[p] = c == 0 ? PairState::O0 : PairState::O1;
    }
  }
  return table;
}

PairObservables naive_pair_observables(const NaiveGraph& g, std::span<const PairState> table, Vertex u, Vertex v) {
  if (u == v) throw InvalidParameter("naive_pair_observables: u and v must differ");
  auto cls = [&](Vertex a, Vertex b) { return table[encode_pair(a, b).value]; };
  auto in_e = [&](Vertex a, Vertex b, int j) {
    return cls(a, b) == (j == 0 ? PairState::E0 : PairState::E1);
  };
  auto in_o = [&](Vertex a, Vertex b, int k) {
    return cls(a, b) == (k == 0 ? PairState::O0 : PairState::O1);
  };
  auto open = [&](Vertex a, Vertex b) { return is_open(cls(a, b)); };
  auto edge = [&](Vertex a, Vertex b) { return is_edge(cls(a, b)); };
  auto complete_set = [&](Vertex a, Vertex b) {
    const auto c = g.common_neighbors(a, b);
    return std::set<Vertex>(c.begin(), c.end());
  };

  std::set<Vertex> X, X0, X1, X2, Y, Z;
  std::set<Vertex> Yjk[2][2];
  for (Vertex w = 0; w < g.n(); ++w) {
    if (w == u || w == v) continue;
    if (open(u, w) && open(v, w)) X.insert(w);
    const int edges = edge(u, w) + edge(v, w);
    const int opens = open(u, w) + open(v, w);
    if (edges == 1 && opens == 1) Y.insert(w);
    if (edges == 2) Z.insert(w);
  }
  for (const Vertex w : X) {
    const int zeros = in_o(u, w, 0) + in_o(v, w, 0);
    if (zeros == 2) X0.insert(w);
    if (zeros == 1) X1.insert(w);
    if (in_o(u, w, 1) && in_o(v, w, 1)) {
      const auto zu = complete_set(u, w);
      const auto zv = complete_set(v, w);
      std::vector<Vertex> both;
      std::set_intersection(zu.begin(), zu.end(), zv.begin(), zv.end(), std::back_inserter(both));
      if (both.empty()) X2.insert(w);
    }
  }
  for (const Vertex w : Y) {
    // the edge side and open side joining w to uv
    const Vertex edge_end = edge(u, w) ? u : v;
    const Vertex open_end = edge_end == u ? v : u;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        if (j == 0 && k == 0) {
          auto zs = complete_set(open_end, w);
          zs.erase(u);
          zs.erase(v);
          if (in_e(edge_end, w, 0) && zs.empty()) Yjk[0][0].insert(w);
        } else if (in_e(edge_end, w, j) && in_o(open_end, w, k)) {
          Yjk[j][k].insert(w);
        }
      }
    }
  }
  auto sz = [](const std::set<Vertex>& s) { return static_cast<std::uint32_t>(s.size()); };
  PairObservables out;
  out.x = sz(X);
  out.x0 = sz(X0);
  out.x1 = sz(X1);
  out.x2 = sz(X2);
  out.y = sz(Y);
  out.y00 = sz(Yjk[0][0]);
  out.y01 = sz(Yjk[0][1]);
  out.y10 = sz(Yjk[1][0]);
  out.y11 = sz(Yjk[1][1]);
  out.z = sz(Z);
  return out;
}

ExpectedDeltas realized_delta(const ProcessState& state, PairId e) {
  ProcessState next = state;
  next.apply_edge(e);
  ExpectedDeltas d;
  d.open = 1;
  const auto before = state.state_table();
  const auto after = next.state_table();
  for (std::size_t p = 0; p < before.size(); ++p) {
    const PairState b = before[p];
    const PairState a = after[p];
    d.q0_minus += b == PairState::O0 && a != PairState::O0;
    d.q1_plus += b != PairState::O1 && a == PairState::O1;
    d.q1_minus += b == PairState::O1 && a != PairState::O1;
  }
  return d;
}

ExpectedDeltas expected_deltas_by_enumeration(const ProcessState& state) {
  ExpectedDeltas sum;
  for (const PairId e : state.open_pairs_sorted()) {
    const auto d = realized_delta(state, e);
    ++sum.open;
    sum.q0_minus += d.q0_minus;
    sum.q1_plus += d.q1_plus;
    sum.q1_minus += d.q1_minus;
  }
  return sum;
}

ExpectedDeltas expected_deltas_by_formula(const ProcessState& state) {
  ExpectedDeltas sum;
  for (const PairId e : state.open_pairs_sorted()) {
    const auto [u, v] = decode_pair(e);
    const auto obs = pair_observables(state, u, v);
    ++sum.open;
    if (state.state(e) == PairState::O0) {
      sum.q0_minus += obs.y00 + obs.y10 + 1;
      sum.q1_plus += obs.y00;
      sum.q1_minus += obs.y01 + obs.y11;
    } else {
      const Vertex z = *state.common_neighbor(u, v);
      sum.q0_minus += obs.y00 + obs.y10;
      sum.q1_minus += obs.y01 + obs.y11 + pair_observables(state, u, z).y00 + pair_observables(state, v, z).y00 - 1;
    }
  }
  return sum;
}

ExpectedDeltas exact_expected_deltas(const ProcessState& state) {
  if (state.terminated()) throw ProcessTerminated();
  return expected_deltas_by_enumeration(state);
}

std::uint64_t count_multiply_partial(const ProcessState& state, std::span<const PairId> A) {
  std::vector<PairId> pairs(A.begin(), A.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::map<PairId, std::uint32_t> hits;
  for (const PairId a : pairs) {
    if (state.state(a) == PairState::E1) throw InvalidParameter("count_multiply_partial: A contains an E1 pair");
    const auto [u, v] = decode_pair(a);
    for (Vertex w = 0; w < state.n(); ++w) {
      if (w == u || w == v) continue;
      const PairState su = state.state(u, w);
      const PairState sv = state.state(v, w);
      if (is_edge(su) && is_open(sv)) ++hits[encode_pair(v, w)];
      if (is_open(su) && is_edge(sv)) ++hits[encode_pair(u, w)];
    }
  }
  return static_cast<std::uint64_t>(std::count_if(hits.begin(), hits.end(), [](const auto& h) { return h.second >= 2; }));
}

NaiveEngine::NaiveEngine(Vertex n, std::uint64_t seed) : graph_(n), rng_(seed) {
  table_ = naive_classify_all(graph_);
}

std::optional<PairId> NaiveEngine::step() {
  std::vector<PairId> open;
  for (std::uint32_t p = 0; p < table_.size(); ++p) {
    if (is_open(table_[p])) open.push_back(PairId{p});
  }
  if (open.empty()) return std::nullopt;
  const PairId e = open[uniform_below(rng_, open.size())];
  const auto [u, v] = decode_pair(e);
  graph_.add_edge(u, v);
  table_ = naive_classify_all(graph_);
  return e;
}

}  // namespace dfp::oracle
