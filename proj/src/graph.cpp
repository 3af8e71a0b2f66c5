#include "deeppm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& arcs, std::vector<std::size_t>& offsets,
               std::vector<Node>& targets) {
  offsets.assign(n + 1, 0);
  for (const auto& [u, v] : arcs) ++offsets[static_cast<std::size_t>(u) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.resize(arcs.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : arcs) targets[cursor[static_cast<std::size_t>(u)]++] = v;
}

bool parse_int(std::string_view token, std::int64_t& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, bool directed,
                        std::vector<std::int64_t> original_ids) {
  require(original_ids.empty() || original_ids.size() == node_count, "original id map must cover every node");
  Graph g;
  g.node_count_ = node_count;
  g.directed_ = directed;
  g.original_ids_ = std::move(original_ids);

  std::vector<Edge> cleaned;
  cleaned.reserve(edges.size());
  for (auto [u, v] : edges) {
    require(u >= 0 && v >= 0 && static_cast<std::size_t>(u) < node_count && static_cast<std::size_t>(v) < node_count,
            "edge endpoint out of range");
    if (u == v) {
      ++g.dropped_self_loops_;
      continue;
    }
    if (!directed && u > v) std::swap(u, v);
    cleaned.emplace_back(u, v);
  }
  std::sort(cleaned.begin(), cleaned.end());
  const auto last = std::unique(cleaned.begin(), cleaned.end());
  g.dropped_duplicates_ = static_cast<std::size_t>(cleaned.end() - last);
  cleaned.erase(last, cleaned.end());
  g.edges_ = std::move(cleaned);

  std::vector<Edge> arcs = g.edges_;
  if (!directed) {
    arcs.reserve(2 * g.edges_.size());
    for (const auto& [u, v] : g.edges_) arcs.emplace_back(v, u);
    std::sort(arcs.begin(), arcs.end());
  }
  build_csr(node_count, arcs, g.out_offsets_, g.out_targets_);

  std::vector<Edge> reversed;
  reversed.reserve(arcs.size());
  for (const auto& [u, v] : arcs) reversed.emplace_back(v, u);
  std::sort(reversed.begin(), reversed.end());
  build_csr(node_count, reversed, g.in_offsets_, g.in_sources_);

  std::vector<Edge> symmetric;
  symmetric.reserve(2 * arcs.size());
  for (const auto& [u, v] : arcs) {
    symmetric.emplace_back(u, v);
    symmetric.emplace_back(v, u);
  }
  std::sort(symmetric.begin(), symmetric.end());
  symmetric.erase(std::unique(symmetric.begin(), symmetric.end()), symmetric.end());
  build_csr(node_count, symmetric, g.und_offsets_, g.und_targets_);
  return g;
}

Graph parse_edge_list(std::string_view text, bool directed) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto first = line.find_first_not_of(" \t\r\v\f");
    if (first == std::string_view::npos || line[first] == '#') continue;

    std::string_view tokens[3];
    std::size_t count = 0;
    std::size_t i = first;
    while (i < line.size() && count < 3) {
      const auto start = line.find_first_not_of(" \t\r\v\f", i);
      if (start == std::string_view::npos) break;
      auto stop = line.find_first_of(" \t\r\v\f", start);
      if (stop == std::string_view::npos) stop = line.size();
      tokens[count++] = line.substr(start, stop - start);
      i = stop;
    }
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (count != 2 || !parse_int(tokens[0], u) || !parse_int(tokens[1], v) || u < 0 || v < 0) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two non-negative integer node ids, got '" +
                       std::string(line) + "'");
    }
    raw.emplace_back(u, v);
  }

  std::vector<std::int64_t> ids;
  ids.reserve(2 * raw.size());
  for (const auto& [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  auto dense = [&](std::int64_t id) {
    return static_cast<Node>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [u, v] : raw) edges.emplace_back(dense(u), dense(v));

  const std::size_t n = ids.size();
  Graph g = Graph::from_edges(n, edges, directed, std::move(ids));
  if (g.edge_count() == 0) throw ValidationError("edge list is empty after removing self-loops and duplicates");
  if (g.dropped_self_loops() + g.dropped_duplicates() > 0) {
    std::clog << "edge list: dropped " << g.dropped_self_loops() << " self-loops and " << g.dropped_duplicates()
              << " duplicate edges\n";
  }
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, bool directed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open edge list " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return parse_edge_list(text, directed);
}

SparseOperator normalized_operator(const Graph& g) {
  const auto n = static_cast<Index>(g.node_count());
  VectorX self_degree(n);
  for (Index i = 0; i < n; ++i)
    self_degree[i] = static_cast<Scalar>(g.degree(static_cast<Node>(i)) + 1);

  std::vector<Eigen::Triplet<Scalar, Index>> entries;
  entries.reserve(2 * g.undirected_edge_count() + g.node_count());
  for (Index i = 0; i < n; ++i) {
    entries.emplace_back(i, i, 1.0 / self_degree[i]);
    for (Node j : g.neighbors(static_cast<Node>(i)))
      entries.emplace_back(i, j, 1.0 / std::sqrt(self_degree[i] * self_degree[j]));
  }
  SparseOperator a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

Scalar EdgeProbabilities::mean() const {
  if (values.empty()) return 0;
  Scalar total = 0;
  for (Scalar v : values) total += v;
  return total / static_cast<Scalar>(values.size());
}

EdgeProbabilities assign_probabilities(const Graph& g, const ProbabilityModel& model, std::uint64_t rng_seed) {
  EdgeProbabilities out;
  switch (model.kind) {
    case ProbabilityModel::Kind::kUniform:
      require(model.p_c > 0.0 && model.p_c <= 1.0, "uniform edge probability must lie in (0, 1]");
      out.values.assign(g.arc_count(), model.p_c);
      break;
    case ProbabilityModel::Kind::kTrivalency: {
      static constexpr Scalar kLevels[3] = {0.1, 0.01, 0.001};
      Rng rng(rng_seed);
      out.values.resize(g.arc_count());
      for (auto& v : out.values) v = kLevels[rng.below(3)];
      break;
    }
  }
  return out;
}

EdgeProbabilities constant_probabilities(const Graph& g, Scalar p) {
  require(p >= 0.0 && p <= 1.0, "edge probability must lie in [0, 1]");
  return EdgeProbabilities{std::vector<Scalar>(g.arc_count(), p)};
}

CostBenefit assign_cost_benefit(const Graph& g, Interval cost_range, Interval benefit_range, std::uint64_t rng_seed) {
  for (const auto& r : {cost_range, benefit_range})
    require(r.lo > 0.0 && r.lo <= r.hi, "cost/benefit interval must be positive with lo <= hi");
  const auto n = static_cast<Index>(g.node_count());
  CostBenefit cb{VectorX(n), VectorX(n)};
  Rng cost_rng(derive_seed(rng_seed, 0));
  Rng benefit_rng(derive_seed(rng_seed, 1));
  for (Index i = 0; i < n; ++i) {
    cb.cost[i] = cost_range.lo == cost_range.hi ? cost_range.lo : cost_rng.uniform(cost_range.lo, cost_range.hi);
    cb.benefit[i] =
        benefit_range.lo == benefit_range.hi ? benefit_range.lo : benefit_rng.uniform(benefit_range.lo, benefit_range.hi);
  }
  return cb;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  for (std::size_t u = 0; u < g.node_count(); ++u) s.max_degree = std::max(s.max_degree, g.degree(static_cast<Node>(u)));
  s.avg_degree = s.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(g.undirected_edge_count()) / static_cast<double>(s.nodes);
  return s;
}

}  // namespace deeppm
