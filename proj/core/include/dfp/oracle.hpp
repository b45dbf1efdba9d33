#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dfp/observables.hpp"
#include "dfp/pair_id.hpp"
#include "dfp/process.hpp"
#include "dfp/rng.hpp"

// Brute-force reference implementations. Everything here follows the
// definitions literally and is meant for small n (roughly n <= 100).
namespace dfp::oracle {

/// A graph as a sorted, duplicate-free list of canonical pairs, with a dense
/// adjacency matrix kept alongside for O(1) membership.
class NaiveGraph {
 public:
  explicit NaiveGraph(Vertex n, std::vector<PairId> edges = {});
  static NaiveGraph from_state(const ProcessState& state);

  Vertex n() const { return n_; }
  std::span<const PairId> edges() const { return edges_; }
  bool has_edge(Vertex u, Vertex v) const { return adj_[u * n_ + v] != 0; }
  std::size_t codegree(Vertex u, Vertex v) const;
  std::vector<Vertex> common_neighbors(Vertex u, Vertex v) const;
  void add_edge(Vertex u, Vertex v);
  NaiveGraph with_edge(Vertex u, Vertex v) const;

 private:
  Vertex n_;
  std::vector<PairId> edges_;
  std::vector<char> adj_;
};

/// Every edge lies on at most one triangle.
bool is_diamond_free(const NaiveGraph& g);

/// Class of every pair, indexed by PairId. A non-edge is open iff g + uv is
/// diamond-free. Throws InvalidInput when g itself contains a diamond.
std::vector<PairState> naive_classify_all(const NaiveGraph& g);

/// X/Y/Z set sizes built as explicit vertex sets from a classification table.
PairObservables naive_pair_observables(const NaiveGraph& g, std::span<const PairState> table, Vertex u, Vertex v);

/// Sums over all open pairs e of the one-step changes Q0-, Q1+, Q1- if e
/// were chosen next. Integer sums keep the two methods exactly comparable.
struct ExpectedDeltas {
  std::uint64_t open = 0;
  std::uint64_t q0_minus = 0;
  std::uint64_t q1_plus = 0;
  std::uint64_t q1_minus = 0;

  double mean_q0_minus() const { return static_cast<double>(q0_minus) / static_cast<double>(open); }
  double mean_q1_plus() const { return static_cast<double>(q1_plus) / static_cast<double>(open); }
  double mean_q1_minus() const { return static_cast<double>(q1_minus) / static_cast<double>(open); }

  friend bool operator==(const ExpectedDeltas&, const ExpectedDeltas&) = default;
};

/// The one-step change of (Q0-, Q1+, Q1-) caused by adding `e`, measured by
/// diffing the class tables before and after apply_edge on a copy.
ExpectedDeltas realized_delta(const ProcessState& state, PairId e);
/// Exact expectation by enumerating every open pair and applying it to a copy.
ExpectedDeltas expected_deltas_by_enumeration(const ProcessState& state);
/// Exact expectation from the partial-vertex counts of each open pair.
ExpectedDeltas expected_deltas_by_formula(const ProcessState& state);
/// Enumeration result; throws ProcessTerminated on an empty open set.
ExpectedDeltas exact_expected_deltas(const ProcessState& state);

/// Open pairs partial to at least two distinct pairs of A. Throws
/// InvalidParameter if A contains an E1 pair.
std::uint64_t count_multiply_partial(const ProcessState& state, std::span<const PairId> A);

/// Reference engine: reclassifies from scratch every step and draws a rank
/// in ascending PairId order with the shared bounded-draw routine.
class NaiveEngine {
 public:
  NaiveEngine(Vertex n, std::uint64_t seed);

  /// Adds one uniformly chosen open pair; nullopt once none remain.
  std::optional<PairId> step();
  const NaiveGraph& graph() const { return graph_; }
  const std::vector<PairState>& table() const { return table_; }

 private:
  NaiveGraph graph_;
  std::vector<PairState> table_;
  Rng rng_;
};

}  // namespace dfp::oracle
