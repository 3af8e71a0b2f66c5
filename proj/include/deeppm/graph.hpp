#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "deeppm/types.hpp"

namespace deeppm {

using Edge = std::pair<Node, Node>;

/// Immutable social graph with dense node indices.
///
/// Directed graphs diffuse along stored edges only. Undirected graphs store
/// each edge once and diffuse both ways, so every graph exposes its
/// diffusion structure as a list of directed arcs in out-CSR order; edge
/// probabilities are indexed by arc. Message passing always uses the
/// undirected, deduplicated collapse regardless of directedness.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from edges over nodes [0, node_count). Self-loops and
  /// duplicates are dropped (for undirected graphs (u,v) and (v,u) are the
  /// same edge). `original_ids`, if given, maps dense index to file ID.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges, bool directed,
                          std::vector<std::int64_t> original_ids = {});

  std::size_t node_count() const { return node_count_; }
  bool directed() const { return directed_; }

  /// Stored edges after cleaning, sorted. For undirected graphs each pair appears once with u < v.
  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Number of diffusion arcs (= edge_count for directed, 2 * edge_count otherwise).
  std::size_t arc_count() const { return out_targets_.size(); }

  std::span<const Node> out_neighbors(Node u) const { return slice(out_offsets_, out_targets_, u); }
  std::span<const Node> in_neighbors(Node u) const { return slice(in_offsets_, in_sources_, u); }
  std::span<const Node> neighbors(Node u) const { return slice(und_offsets_, und_targets_, u); }

  /// Arc ids of u's out-arcs are [arc_begin(u), arc_begin(u) + out_neighbors(u).size()).
  std::size_t arc_begin(Node u) const { return out_offsets_[static_cast<std::size_t>(u)]; }

  /// Degree in the undirected collapse.
  std::size_t degree(Node u) const { return neighbors(u).size(); }
  std::size_t undirected_edge_count() const { return und_targets_.size() / 2; }

  std::int64_t original_id(Node u) const {
    return original_ids_.empty() ? u : original_ids_[static_cast<std::size_t>(u)];
  }
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }

  /// Self-loops and duplicates removed by from_edges.
  std::size_t dropped_self_loops() const { return dropped_self_loops_; }
  std::size_t dropped_duplicates() const { return dropped_duplicates_; }

 private:
  static std::span<const Node> slice(const std::vector<std::size_t>& offsets,
                                     const std::vector<Node>& targets, Node u) {
    const auto i = static_cast<std::size_t>(u);
    return {targets.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }

  std::size_t node_count_ = 0;
  bool directed_ = true;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Node> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Node> in_sources_;
  std::vector<std::size_t> und_offsets_{0};
  std::vector<Node> und_targets_;
  std::vector<std::int64_t> original_ids_;
  std::size_t dropped_self_loops_ = 0;
  std::size_t dropped_duplicates_ = 0;
};

/// Reads a SNAP-style edge list: one "u v" pair per line, '#' comments,
/// arbitrary whitespace. Node IDs are re-indexed densely in ascending
/// original-ID order. Throws ParseError on malformed lines (with the line
/// number) and ValidationError when no edge survives cleaning.
Graph load_edge_list(const std::filesystem::path& path, bool directed);

/// Same as load_edge_list, reading from an in-memory text.
Graph parse_edge_list(std::string_view text, bool directed);

/// Â = D^{-1/2} (A + I) D^{-1/2} over the undirected, unweighted collapse.
SparseOperator normalized_operator(const Graph& g);

struct ProbabilityModel {
  enum class Kind { kUniform, kTrivalency };
  Kind kind = Kind::kUniform;
  Scalar p_c = 0.1;

  static ProbabilityModel uniform(Scalar p) { return {Kind::kUniform, p}; }
  static ProbabilityModel trivalency() { return {Kind::kTrivalency, 0.0}; }
};

/// One transmission probability per diffusion arc, indexed by arc id.
struct EdgeProbabilities {
  std::vector<Scalar> values;

  Scalar operator[](std::size_t arc) const { return values[arc]; }
  std::size_t size() const { return values.size(); }
  Scalar mean() const;
};

EdgeProbabilities assign_probabilities(const Graph& g, const ProbabilityModel& model, std::uint64_t rng_seed);

/// Every arc gets the same value; values outside [0, 1] are rejected. Zero is
/// allowed here for diffusion-free test fixtures.
EdgeProbabilities constant_probabilities(const Graph& g, Scalar p);

struct Interval {
  Scalar lo = 0;
  Scalar hi = 0;
};

inline constexpr Interval kDefaultCostRange{50.0, 100.0};
inline constexpr Interval kDefaultBenefitRange{800.0, 1000.0};

struct CostBenefit {
  VectorX cost;
  VectorX benefit;
};

CostBenefit assign_cost_benefit(const Graph& g, Interval cost_range, Interval benefit_range, std::uint64_t rng_seed);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  double avg_degree = 0;
};

/// Degrees are taken on the undirected collapse; avg_degree = 2|E_undirected| / |V|.
GraphStats graph_stats(const Graph& g);

}  // namespace deeppm
