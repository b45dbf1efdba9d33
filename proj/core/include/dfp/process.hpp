#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dfp/pair_id.hpp"
#include "dfp/rng.hpp"

namespace dfp {

/// Five-way classification of an unordered pair.
///
///   E0  edge on no triangle          E1  edge on exactly one triangle
///   O0  open, codegree 0             O1  open, codegree 1, both edges to the
///                                        common neighbour are E0
///   C   closed: adding it would create a diamond
enum class PairState : std::uint8_t { E0, E1, O0, O1, C };

std::string_view to_string(PairState s);

constexpr bool is_edge(PairState s) { return s == PairState::E0 || s == PairState::E1; }
constexpr bool is_open(PairState s) { return s == PairState::O0 || s == PairState::O1; }

struct Transition {
  PairId pair;
  PairState from;
  PairState to;
};

/// Everything apply_edge changed. `transitions` lists every pair other than
/// the chosen one whose class changed; each pair appears at most once.
struct UpdateDelta {
  PairId chosen;
  PairState prior = PairState::O0;
  std::optional<Vertex> witness;  // common neighbour when prior == O1
  std::vector<Transition> transitions;
};

struct Counters {
  std::uint64_t q0 = 0;
  std::uint64_t q1 = 0;
  std::uint64_t m0 = 0;
  std::uint64_t m1 = 0;
  std::uint64_t blue = 0;
  std::uint64_t green = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// Mutable state of one run of the diamond-free process.
///
/// Pair classes live in a dense one-byte table. Open pairs are additionally
/// kept in an unordered array with a reverse position index, so uniform
/// sampling and removal are O(1). Adjacency lists are sorted.
class ProcessState {
 public:
  ProcessState(Vertex n, std::uint64_t seed);

  Vertex n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t steps() const { return steps_; }
  /// t = i / n^{3/2}
  double scaled_time() const;

  const Counters& counters() const { return counters_; }
  std::uint64_t open_count() const { return open_.size(); }
  bool terminated() const { return open_.empty(); }

  PairState state(PairId p) const { return states_[p.value]; }
  PairState state(Vertex u, Vertex v) const { return states_[encode_pair(u, v).value]; }
  std::span<const PairState> state_table() const { return states_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  bool has_edge(Vertex u, Vertex v) const;
  std::size_t codegree(Vertex u, Vertex v) const;
  /// First common neighbour of u and v, if any.
  std::optional<Vertex> common_neighbor(Vertex u, Vertex v) const;

  /// Third vertex of the triangle through an E1 edge.
  std::optional<Vertex> apex(PairId edge) const;
  /// True when the edge closed a triangle as it was added.
  bool is_green(PairId edge) const { return green_.contains(edge); }

  /// Recomputes the class of {u, v} from adjacency alone, ignoring the table.
  PairState classify(Vertex u, Vertex v) const;

  /// Uniform draw from the open set; nullopt once the process has terminated.
  std::optional<PairId> sample_open();
  /// Uniform draw by rank in ascending PairId order. Consumes the generator
  /// exactly like the naive reference engine; O(n^2), test use only.
  std::optional<PairId> sample_open_canonical();

  /// Adds the open pair p as an edge and reclassifies every affected pair.
  UpdateDelta apply_edge(PairId p);

  std::vector<PairId> open_pairs_sorted() const;
  std::vector<PairId> edges() const;

  /// Full recount of the table and structural checks (sorted adjacency,
  /// open-list index, codegree <= 1 on every edge, apex table). Throws
  /// std::logic_error describing the first inconsistency.
  void check_consistency() const;

  Rng& rng() { return rng_; }

 private:
  void set_state(PairId p, PairState to, std::vector<Transition>* log);
  void insert_edge(Vertex u, Vertex v);
  void close_partial_pairs(Vertex a, Vertex b, PairId skip, std::vector<Transition>& log);

  Vertex n_;
  std::uint64_t seed_;
  std::uint64_t steps_ = 0;
  Counters counters_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<PairState> states_;
  std::vector<std::uint32_t> open_;
  std::vector<std::uint32_t> open_pos_;
  std::unordered_map<PairId, Vertex> apex_;
  std::unordered_set<PairId> green_;
  Rng rng_;
};

}  // namespace dfp
