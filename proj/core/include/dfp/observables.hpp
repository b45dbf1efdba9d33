#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dfp/pair_id.hpp"
#include "dfp/process.hpp"

namespace dfp {

/// Sizes of the open (X), partial (Y) and complete (Z) vertex sets of a pair.
///
/// X0, X1, X2 are disjoint but need not cover X. Y00..Y11 partition Y when
/// the pair is a non-edge. For an edge, Y00 uses the asymmetric rule: the
/// open side may have its single common neighbour inside {u, v}.
struct PairObservables {
  std::uint32_t x = 0, x0 = 0, x1 = 0, x2 = 0;
  std::uint32_t y = 0, y00 = 0, y01 = 0, y10 = 0, y11 = 0;
  std::uint32_t z = 0;

  friend bool operator==(const PairObservables&, const PairObservables&) = default;
};

struct VertexObservables {
  std::uint32_t w0 = 0, w1 = 0;  // open-pair neighbourhoods
  std::uint32_t d0 = 0, d1 = 0;  // degrees into E0, E1

  friend bool operator==(const VertexObservables&, const VertexObservables&) = default;
};

PairObservables pair_observables(const ProcessState& state, Vertex u, Vertex v);
VertexObservables vertex_observables(const ProcessState& state, Vertex v);

enum class ProbeKind : std::uint8_t { X0, X1, X2, Y00, Y01, Y10, Y11, W0, W1, D0, D1 };

std::string_view to_string(ProbeKind k);
std::optional<ProbeKind> parse_probe_kind(std::string_view s);
constexpr bool is_pair_kind(ProbeKind k) { return k <= ProbeKind::Y11; }

struct ProbeValue {
  ProbeKind kind;
  std::uint32_t id;  // PairId value for pair kinds, vertex for W*/D*
  std::uint32_t value;

  friend bool operator==(const ProbeValue&, const ProbeValue&) = default;
};

enum class CodegreeMode : std::uint8_t {
  Auto,     // exact when n <= 200 or when exact is no dearer than sampling
  Exact,
  Sampled,
};

struct ProbeConfig {
  std::uint32_t pairs = 0;
  std::uint32_t vertices = 0;
  CodegreeMode codegree = CodegreeMode::Auto;
  std::uint32_t codegree_samples = 100000;
};

/// Fixed probe targets, drawn once at i = 0.
struct ProbeSet {
  std::vector<PairId> pairs;
  std::vector<Vertex> vertices;
};

/// Draws distinct probe pairs and vertices from a stream derived from the
/// run seed, so the process generator itself is left untouched.
ProbeSet select_probes(Vertex n, std::uint64_t seed, const ProbeConfig& cfg);

struct Snapshot {
  std::uint64_t i = 0;
  double t = 0.0;
  Counters counters;
  std::uint32_t max_degree = 0;
  std::uint32_t max_codegree = 0;
  std::vector<ProbeValue> probes;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Pure capture of the state. Probe pairs that have become edges are only
/// recorded for X0/Y00, and only while they stay in E0.
Snapshot snapshot(const ProcessState& state, const ProbeConfig& cfg, const ProbeSet& probes);

std::uint32_t max_degree(const ProcessState& state);
/// Exact maximum codegree over all pairs: O(sum of squared degrees).
std::uint32_t max_codegree_exact(const ProcessState& state);
/// Maximum over `samples` uniformly random pairs drawn from `rng`, and never
/// below 1 once a triangle exists.
std::uint32_t max_codegree_sampled(const ProcessState& state, std::uint32_t samples, Rng& rng);

}  // namespace dfp
