#include "dfp/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dfp/errors.hpp"

namespace dfp {

std::string_view to_string(PairState s) {
  switch (s) {
    case PairState::E0: return "E0";
    case PairState::E1: return "E1";
    case PairState::O0: return "O0";
    case PairState::O1: return "O1";
    case PairState::C: return "C";
  }
  return "?";
}

ProcessState::ProcessState(Vertex n, std::uint64_t seed) : n_(n), seed_(seed), rng_(seed) {
  if (n < 2) throw InvalidParameter("process needs at least 2 vertices, got " + std::to_string(n));
  if (n > kMaxVertices) throw InvalidParameter("n exceeds the 32-bit pair index range: " + std::to_string(n));
  const auto pairs = pair_count(n);
  adj_.resize(n);
  states_.assign(pairs, PairState::O0);
  open_.resize(pairs);
  open_pos_.resize(pairs);
  for (std::uint32_t p = 0; p < pairs; ++p) {
    open_[p] = p;
    open_pos_[p] = p;
  }
  counters_.q0 = pairs;
}

double ProcessState::scaled_time() const {
  return static_cast<double>(steps_) / std::pow(static_cast<double>(n_), 1.5);
}

bool ProcessState::has_edge(Vertex u, Vertex v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::size_t ProcessState::codegree(Vertex u, Vertex v) const {
  const auto& a = adj_[u];
  const auto& b = adj_[v];
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::optional<Vertex> ProcessState::common_neighbor(Vertex u, Vertex v) const {
  const auto& a = adj_[u];
  const auto& b = adj_[v];
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return *i;
    }
  }
  return std::nullopt;
}

std::optional<Vertex> ProcessState::apex(PairId edge) const {
  if (auto it = apex_.find(edge); it != apex_.end()) return it->second;
  return std::nullopt;
}

PairState ProcessState::classify(Vertex u, Vertex v) const {
  if (u == v) throw InvalidParameter("classify: u and v must differ");
  if (u >= n_ || v >= n_) throw InvalidParameter("classify: vertex out of range");
  const std::size_t c = codegree(u, v);
  if (has_edge(u, v)) return c == 0 ? PairState::E0 : PairState::E1;
  if (c == 0) return PairState::O0;
  if (c >= 2) return PairState::C;
  const Vertex z = *common_neighbor(u, v);
  const bool uz_free = codegree(u, z) == 0;
  const bool vz_free = codegree(v, z) == 0;
  return uz_free && vz_free ? PairState::O1 : PairState::C;
}

void ProcessState::set_state(PairId p, PairState to, std::vector<Transition>* log) {
  const PairState from = states_[p.value];
  if (from == to) return;
  auto bump = [this](PairState s, int d) {
    switch (s) {
      case PairState::E0: counters_.m0 += d; break;
      case PairState::E1: counters_.m1 += d; break;
      case PairState::O0: counters_.q0 += d; break;
      case PairState::O1: counters_.q1 += d; break;
      case PairState::C: break;
    }
  };
  bump(from, -1);
  bump(to, +1);
  if (is_open(from) && !is_open(to)) {
    const std::uint32_t pos = open_pos_[p.value];
    const std::uint32_t last = open_.back();
    open_[pos] = last;
    open_pos_[last] = pos;
    open_.pop_back();
  }
  states_[p.value] = to;
  if (log) log->push_back({p, from, to});
}

void ProcessState::insert_edge(Vertex u, Vertex v) {
  auto& a = adj_[u];
  a.insert(std::upper_bound(a.begin(), a.end(), v), v);
  auto& b = adj_[v];
  b.insert(std::upper_bound(b.begin(), b.end(), u), u);
}

// Closes every open pair partial to {a, b}: pairs yw with xw an edge,
// {x, y} = {a, b}, and yw open. Reads pre-insertion adjacency.
void ProcessState::close_partial_pairs(Vertex a, Vertex b, PairId skip, std::vector<Transition>& log) {
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    for (const Vertex w : adj_[x]) {
      if (w == y) continue;
      const PairId yw = encode_pair(y, w);
      if (yw == skip) continue;
      if (is_open(states_[yw.value])) set_state(yw, PairState::C, &log);
    }
  }
}

std::optional<PairId> ProcessState::sample_open() {
  if (open_.empty()) return std::nullopt;
  return PairId{open_[uniform_below(rng_, open_.size())]};
}

std::optional<PairId> ProcessState::sample_open_canonical() {
  if (open_.empty()) return std::nullopt;
  auto rank = uniform_below(rng_, open_.size());
  for (std::uint32_t p = 0; p < states_.size(); ++p) {
    if (is_open(states_[p]) && rank-- == 0) return PairId{p};
  }
  throw std::logic_error("open list and state table disagree");
}

UpdateDelta ProcessState::apply_edge(PairId p) {
  if (p.value >= states_.size()) throw InvalidTransition("apply_edge: pair index out of range");
  const PairState prior = states_[p.value];
  if (!is_open(prior)) {
    throw InvalidTransition("apply_edge: pair " + std::to_string(p.value) + " is " +
                            std::string(to_string(prior)) + ", not open");
  }
  const auto [u, v] = decode_pair(p);
  UpdateDelta delta{p, prior, std::nullopt, {}};

  if (prior == PairState::O0) {
    // Codegree 0: no triangle is formed, and each w adjacent to exactly one
    // endpoint gains a common neighbour with the other endpoint.
    for (const auto& [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
      for (const Vertex w : adj_[x]) {
        const PairId yw = encode_pair(y, w);
        const PairState s = states_[yw.value];
        if (s == PairState::O0) {
          const bool xw_free = states_[encode_pair(x, w).value] == PairState::E0;
          set_state(yw, xw_free ? PairState::O1 : PairState::C, &delta.transitions);
        } else if (s == PairState::O1) {
          set_state(yw, PairState::C, &delta.transitions);
        }
      }
    }
    set_state(p, PairState::E0, nullptr);
    ++counters_.blue;
  } else {
    const auto z = common_neighbor(u, v);
    if (!z) throw std::logic_error("O1 pair without a common neighbour");
    delta.witness = *z;
    close_partial_pairs(u, v, p, delta.transitions);
    close_partial_pairs(u, *z, p, delta.transitions);
    close_partial_pairs(v, *z, p, delta.transitions);
    const PairId uz = encode_pair(u, *z);
    const PairId vz = encode_pair(v, *z);
    set_state(uz, PairState::E1, &delta.transitions);
    set_state(vz, PairState::E1, &delta.transitions);
    set_state(p, PairState::E1, nullptr);
    apex_[p] = *z;
    apex_[uz] = v;
    apex_[vz] = u;
    green_.insert(p);
    ++counters_.green;
  }
  insert_edge(u, v);
  ++steps_;
  return delta;
}

std::vector<PairId> ProcessState::open_pairs_sorted() const {
  std::vector<PairId> out;
  out.reserve(open_.size());
  for (const auto p : open_) out.push_back(PairId{p});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairId> ProcessState::edges() const {
  std::vector<PairId> out;
  for (Vertex v = 0; v < n_; ++v) {
    for (const Vertex w : adj_[v]) {
      if (w > v) break;
      out.push_back(encode_pair(w, v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ProcessState::check_consistency() const {
  auto fail = [](const std::string& what) { throw std::logic_error("consistency: " + what); };
  Counters recount;
  std::uint64_t edge_ends = 0;
  for (Vertex v = 0; v < n_; ++v) {
    const auto& a = adj_[v];
    if (!std::is_sorted(a.begin(), a.end()) || std::adjacent_find(a.begin(), a.end()) != a.end()) {
      fail("adjacency of " + std::to_string(v) + " not strictly sorted");
    }
    edge_ends += a.size();
  }
  for (std::uint32_t p = 0; p < states_.size(); ++p) {
    const auto [u, v] = decode_pair(PairId{p});
    const PairState s = states_[p];
    if (is_edge(s) != has_edge(u, v)) fail("pair " + std::to_string(p) + " edge flag mismatch");
    switch (s) {
      case PairState::E0: ++recount.m0; break;
      case PairState::E1: ++recount.m1; break;
      case PairState::O0: ++recount.q0; break;
      case PairState::O1: ++recount.q1; break;
      case PairState::C: break;
    }
    if (is_open(s)) {
      const auto pos = open_pos_[p];
      if (pos >= open_.size() || open_[pos] != p) fail("open index broken at pair " + std::to_string(p));
    }
    if (is_edge(s)) {
      const auto c = codegree(u, v);
      if (c > 1) fail("edge " + std::to_string(p) + " lies on " + std::to_string(c) + " triangles");
      if ((s == PairState::E1) != (c == 1)) fail("edge " + std::to_string(p) + " E0/E1 mismatch");
      if (s == PairState::E1 && apex(PairId{p}) != common_neighbor(u, v)) fail("apex mismatch");
    }
  }
  recount.blue = counters_.blue;
  recount.green = counters_.green;
  if (recount != counters_) fail("counters differ from table recount");
  if (recount.q0 + recount.q1 != open_.size()) fail("open list size");
  if (edge_ends != 2 * steps_) fail("edge count differs from step count");
  if (counters_.m1 % 3 != 0 || counters_.green != counters_.m1 / 3) fail("triangle accounting");
  if (counters_.blue + counters_.green != steps_) fail("blue + green != i");
  if (green_.size() != counters_.green || apex_.size() != counters_.m1) fail("side tables");
}

}  // namespace dfp
