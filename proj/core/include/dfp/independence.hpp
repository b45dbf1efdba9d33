#pragma once

#include <cstdint>
#include <vector>

#include "dfp/process.hpp"

namespace dfp {

using AdjacencyList = std::vector<std::vector<Vertex>>;

/// Subgraph of edges whose addition did not close a triangle.
AdjacencyList blue_subgraph(const ProcessState& state);

/// Maximal independent set by repeatedly taking a minimum-degree vertex of
/// the remaining graph (ties to the lowest id) and deleting its neighbourhood.
std::vector<Vertex> greedy_independent_set(const AdjacencyList& g);

/// Independence number by branch and bound; at most 64 vertices.
std::uint32_t exact_independence_number(const AdjacencyList& g);

/// Greedy independent set size of the blue subgraph.
std::uint32_t greedy_blue_independence(const ProcessState& state);

}  // namespace dfp
