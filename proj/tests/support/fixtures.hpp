#pragma once

#include <vector>

#include "deeppm/graph.hpp"
#include "deeppm/rng.hpp"

namespace deeppm::testing {

inline Graph path_graph(std::size_t n, bool directed = true) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(static_cast<Node>(i), static_cast<Node>(i + 1));
  return Graph::from_edges(n, edges, directed);
}

/// Hub 0 with arcs to leaves 1..leaves.
inline Graph star_graph(std::size_t leaves, bool directed = true) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<Node>(i));
  return Graph::from_edges(leaves + 1, edges, directed);
}

inline Graph triangle_graph() {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {0, 2}};
  return Graph::from_edges(3, edges, false);
}

/// Erdős–Rényi style directed graph with exactly `edge_count` distinct arcs (if possible).
inline Graph random_graph(std::size_t n, std::size_t edge_count, std::uint64_t seed, bool directed = true) {
  Rng rng(seed);
  std::vector<Edge> edges;
  std::size_t attempts = 0;
  while (edges.size() < edge_count && attempts++ < 100 * edge_count + 100) {
    const auto u = static_cast<Node>(rng.below(n));
    const auto v = static_cast<Node>(rng.below(n));
    if (u == v) continue;
    Edge e = directed || u < v ? Edge{u, v} : Edge{v, u};
    bool seen = false;
    for (const auto& f : edges) seen = seen || f == e;
    if (!seen) edges.push_back(e);
  }
  return Graph::from_edges(n, edges, directed);
}

/// Two dense communities of `half` nodes each joined by a few bridge edges (undirected).
inline Graph two_communities(std::size_t half, Scalar density, std::size_t bridges, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t block = 0; block < 2; ++block) {
    const std::size_t base = block * half;
    for (std::size_t i = 0; i < half; ++i)
      for (std::size_t j = i + 1; j < half; ++j)
        if (rng.uniform() < density) edges.emplace_back(static_cast<Node>(base + i), static_cast<Node>(base + j));
  }
  for (std::size_t b = 0; b < bridges; ++b)
    edges.emplace_back(static_cast<Node>(rng.below(half)), static_cast<Node>(half + rng.below(half)));
  return Graph::from_edges(2 * half, edges, false);
}

inline CostBenefit flat_cost_benefit(std::size_t n, Scalar cost, Scalar benefit) {
  return CostBenefit{VectorX::Constant(static_cast<Index>(n), cost), VectorX::Constant(static_cast<Index>(n), benefit)};
}

}  // namespace deeppm::testing
