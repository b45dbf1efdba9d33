#include "dfp/observables.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "dfp/errors.hpp"

namespace dfp {

namespace {

constexpr std::array<std::string_view, 11> kProbeNames = {"X0",  "X1",  "X2", "Y00", "Y01", "Y10",
                                                          "Y11", "W0",  "W1", "D0",  "D1"};

}  // namespace

std::string_view to_string(ProbeKind k) { return kProbeNames[static_cast<std::size_t>(k)]; }

std::optional<ProbeKind> parse_probe_kind(std::string_view s) {
  for (std::size_t i = 0; i < kProbeNames.size(); ++i) {
    if (kProbeNames[i] == s) return static_cast<ProbeKind>(i);
  }
  return std::nullopt;
}

PairObservables pair_observables(const ProcessState& state, Vertex u, Vertex v) {
  if (u == v) throw InvalidParameter("pair_observables: u and v must differ");
  if (u >= state.n() || v >= state.n()) throw InvalidParameter("pair_observables: vertex out of range");
  PairObservables out;
  for (Vertex w = 0; w < state.n(); ++w) {
    if (w == u || w == v) continue;
    const PairState su = state.state(u, w);
    const PairState sv = state.state(v, w);
    if (is_open(su) && is_open(sv)) {
      ++out.x;
      const int zeros = (su == PairState::O0) + (sv == PairState::O0);
      if (zeros == 2) {
        ++out.x0;
      } else if (zeros == 1) {
        ++out.x1;
      } else if (state.common_neighbor(u, w) != state.common_neighbor(v, w)) {
        // both O1, so each has exactly one common neighbour
        ++out.x2;
      }
    } else if (is_edge(su) && is_edge(sv)) {
      ++out.z;
    } else if ((is_edge(su) && is_open(sv)) || (is_open(su) && is_edge(sv))) {
      ++out.y;
      const bool u_edge = is_edge(su);
      const PairState edge_side = u_edge ? su : sv;
      const PairState open_side = u_edge ? sv : su;
      const Vertex y_end = u_edge ? v : u;
      const int j = edge_side == PairState::E0 ? 0 : 1;
      const int k = open_side == PairState::O0 ? 0 : 1;
      if (j == 0) {
        bool witness_outside = false;
        if (open_side == PairState::O1) {
          const Vertex z = *state.common_neighbor(y_end, w);
          witness_outside = z != u && z != v;
        }
        if (!witness_outside) ++out.y00;
        if (k == 1) ++out.y01;
      } else {
        (k == 0 ? out.y10 : out.y11)++;
      }
    }
  }
  return out;
}

VertexObservables vertex_observables(const ProcessState& state, Vertex v) {
  if (v >= state.n()) throw InvalidParameter("vertex_observables: vertex out of range");
  VertexObservables out;
  for (Vertex w = 0; w < state.n(); ++w) {
    if (w == v) continue;
    switch (state.state(v, w)) {
      case PairState::O0: ++out.w0; break;
      case PairState::O1: ++out.w1; break;
      case PairState::E0: ++out.d0; break;
      case PairState::E1: ++out.d1; break;
      case PairState::C: break;
    }
  }
  return out;
}

ProbeSet select_probes(Vertex n, std::uint64_t seed, const ProbeConfig& cfg) {
  Rng rng(mix_seed(seed ^ 0x70726f6265ULL));
  ProbeSet out;
  const auto pairs = pair_count(n);
  const auto want_pairs = std::min<std::uint64_t>(cfg.pairs, pairs);
  std::unordered_set<std::uint32_t> seen;
  while (out.pairs.size() < want_pairs) {
    const auto p = static_cast<std::uint32_t>(uniform_below(rng, pairs));
    if (seen.insert(p).second) out.pairs.push_back(PairId{p});
  }
  seen.clear();
  const auto want_vertices = std::min<std::uint64_t>(cfg.vertices, n);
  while (out.vertices.size() < want_vertices) {
    const auto w = static_cast<std::uint32_t>(uniform_below(rng, n));
    if (seen.insert(w).second) out.vertices.push_back(w);
  }
  return out;
}

std::uint32_t max_degree(const ProcessState& state) {
  std::size_t best = 0;
  for (Vertex v = 0; v < state.n(); ++v) best = std::max(best, state.degree(v));
  return static_cast<std::uint32_t>(best);
}

std::uint32_t max_codegree_exact(const ProcessState& state) {
  std::vector<std::uint32_t> count(state.n(), 0);
  std::vector<Vertex> touched;
  std::uint32_t best = 0;
  for (Vertex u = 0; u < state.n(); ++u) {
    for (const Vertex w : state.neighbors(u)) {
      for (const Vertex x : state.neighbors(w)) {
        if (x <= u) continue;
        if (count[x]++ == 0) touched.push_back(x);
      }
    }
    for (const Vertex x : touched) {
      best = std::max(best, count[x]);
      count[x] = 0;
    }
    touched.clear();
  }
  return best;
}

std::uint32_t max_codegree_sampled(const ProcessState& state, std::uint32_t samples, Rng& rng) {
  std::uint32_t best = state.counters().m1 > 0 ? 1 : 0;
  const auto pairs = pair_count(state.n());
  for (std::uint32_t s = 0; s < samples; ++s) {
    const auto [u, v] = decode_pair(PairId{static_cast<std::uint32_t>(uniform_below(rng, pairs))});
    best = std::max(best, static_cast<std::uint32_t>(state.codegree(u, v)));
  }
  return best;
}

Snapshot snapshot(const ProcessState& state, const ProbeConfig& cfg, const ProbeSet& probes) {
  Snapshot snap;
  snap.i = state.steps();
  snap.t = state.scaled_time();
  snap.counters = state.counters();
  snap.max_degree = max_degree(state);
  bool exact = cfg.codegree == CodegreeMode::Exact;
  if (cfg.codegree == CodegreeMode::Auto) {
    // exact whenever the full pass is no dearer than sampling
    std::uint64_t sum_sq = 0;
    for (Vertex v = 0; v < state.n(); ++v) sum_sq += state.degree(v) * state.degree(v);
    const std::uint64_t avg_deg = 2 * state.steps() / state.n() + 1;
    exact = state.n() <= 200 || sum_sq <= std::uint64_t{cfg.codegree_samples} * avg_deg;
  }
  if (exact) {
    snap.max_codegree = max_codegree_exact(state);
  } else {
    Rng rng(mix_seed(state.seed() ^ mix_seed(state.steps())));
    snap.max_codegree = max_codegree_sampled(state, cfg.codegree_samples, rng);
  }

  for (const PairId p : probes.pairs) {
    const PairState s = state.state(p);
    if (s == PairState::E1) continue;
    const auto [u, v] = decode_pair(p);
    const auto obs = pair_observables(state, u, v);
    snap.probes.push_back({ProbeKind::X0, p.value, obs.x0});
    if (s != PairState::E0) {
      snap.probes.push_back({ProbeKind::X1, p.value, obs.x1});
      snap.probes.push_back({ProbeKind::X2, p.value, obs.x2});
    }
    snap.probes.push_back({ProbeKind::Y00, p.value, obs.y00});
    if (s != PairState::E0) {
      snap.probes.push_back({ProbeKind::Y01, p.value, obs.y01});
      snap.probes.push_back({ProbeKind::Y10, p.value, obs.y10});
      snap.probes.push_back({ProbeKind::Y11, p.value, obs.y11});
    }
  }
  for (const Vertex v : probes.vertices) {
    const auto obs = vertex_observables(state, v);
    snap.probes.push_back({ProbeKind::W0, v, obs.w0});
    snap.probes.push_back({ProbeKind::W1, v, obs.w1});
    snap.probes.push_back({ProbeKind::D0, v, obs.d0});
    snap.probes.push_back({ProbeKind::D1, v, obs.d1});
  }
  return snap;
}

}  // namespace dfp
