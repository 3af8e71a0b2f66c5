#include "deeppm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deeppm/parallel.hpp"
#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

constexpr std::uint64_t kWorldStream = 0;
constexpr std::uint64_t kSampleStream = 1;

void check_costs(const Graph& g, const CostBenefit& cb) {
  require_shape(static_cast<std::size_t>(cb.cost.size()) == g.node_count() &&
                    static_cast<std::size_t>(cb.benefit.size()) == g.node_count(),
                "cost/benefit vectors must have one entry per node");
}

// Mean over worlds of the benefit newly reached by each candidate, minus its cost.
std::vector<Scalar> marginal_gains(const Graph& g, const WorldSet& worlds, const CostBenefit& cb, const HardMask& seeds,
                                   const std::vector<Node>& candidates, std::size_t workers) {
  std::vector<HardMask> reached(worlds.size());
  for (std::size_t w = 0; w < worlds.size(); ++w) reached[w] = rollout_in_world(g, worlds[w], seeds);

  std::vector<Scalar> gains(candidates.size(), 0.0);
  parallel_chunks(candidates.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::uint8_t> active;
    std::vector<Node> scratch;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
      active = reached[w];
      for (std::size_t k = begin; k < end; ++k)
        gains[k] += extra_benefit(g, worlds[w], cb.benefit, active, candidates[k], scratch);
    }
  });
  const auto r = static_cast<Scalar>(worlds.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) gains[k] = gains[k] / r - cb.cost[candidates[k]];
  return gains;
}

std::vector<Node> affordable(const HardMask& mask, const VectorX& cost, Scalar remaining,
                             const std::vector<Node>& pool) {
  std::vector<Node> out;
  for (Node v : pool)
    if (!mask[static_cast<std::size_t>(v)] && cost[v] <= remaining) out.push_back(v);
  return out;
}

std::vector<Node> all_nodes(std::size_t n) {
  std::vector<Node> nodes(n);
  std::iota(nodes.begin(), nodes.end(), Node{0});
  return nodes;
}

// Shared loop of the two greedy variants; `pool_for_round` picks the nodes scored in round r.
template <typename PoolFn>
HardMask greedy_loop(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                     const BaselineConfig& cfg, PoolFn&& pool_for_round) {
  cfg.validate();
  check_costs(g, cb);
  HardMask mask(g.node_count(), 0);
  Scalar spent = 0;
  for (std::size_t round = 0; round < g.node_count(); ++round) {
    const std::vector<Node> candidates = affordable(mask, cb.cost, budget - spent, pool_for_round(round, mask));
    if (candidates.empty()) break;
    const WorldSet worlds(g, p, cfg.rollouts, derive_seed(cfg.rng_seed, kWorldStream, round));
    const auto gains = marginal_gains(g, worlds, cb, mask, candidates, cfg.workers);
    std::size_t best = 0;
    for (std::size_t k = 1; k < gains.size(); ++k)
      if (gains[k] > gains[best]) best = k;
    if (!(gains[best] > 0)) break;
    mask[static_cast<std::size_t>(candidates[best])] = 1;
    spent += cb.cost[candidates[best]];
  }
  return mask;
}

// Picks the affordable unselected node with the largest score; ties go to the lower index.
template <typename Score>
Node best_affordable(const HardMask& mask, const VectorX& cost, Scalar remaining, Score&& score) {
  Node best = -1;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    const auto node = static_cast<Node>(v);
    if (mask[v] || cost[node] > remaining) continue;
    if (best < 0 || score(node) > score(best)) best = node;
  }
  return best;
}

HardMask take_in_order(const std::vector<Node>& order, const VectorX& cost, Scalar budget, std::size_t n) {
  HardMask mask(n, 0);
  Scalar spent = 0;
  for (Node v : order) {
    if (spent + cost[v] <= budget) {
      mask[static_cast<std::size_t>(v)] = 1;
      spent += cost[v];
    }
  }
  return mask;
}

}  // namespace

void BaselineConfig::validate() const {
  require(rollouts >= 1, "baseline rollouts must be at least 1");
  require(sample_fraction > 0 && sample_fraction <= 1, "stochastic greedy sample fraction must lie in (0, 1]");
}

HardMask simple_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                       const BaselineConfig& cfg) {
  const std::vector<Node> nodes = all_nodes(g.node_count());
  return greedy_loop(g, p, cb, budget, cfg, [&](std::size_t, const HardMask&) { return nodes; });
}

HardMask stochastic_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                           const BaselineConfig& cfg) {
  return greedy_loop(g, p, cb, budget, cfg, [&](std::size_t round, const HardMask& mask) {
    std::vector<Node> remaining;
    for (std::size_t v = 0; v < mask.size(); ++v)
      if (!mask[v]) remaining.push_back(static_cast<Node>(v));
    const auto size = static_cast<std::size_t>(
        std::ceil(cfg.sample_fraction * static_cast<Scalar>(remaining.size()) - 1e-12));
    Rng rng(derive_seed(cfg.rng_seed, kSampleStream, round));
    for (std::size_t i = 0; i < size; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(remaining.size() - i));
      std::swap(remaining[i], remaining[j]);
    }
    remaining.resize(size);
    std::sort(remaining.begin(), remaining.end());
    return remaining;
  });
}

HardMask double_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                       const BaselineConfig& cfg) {
  cfg.validate();
  check_costs(g, cb);
  const std::size_t n = g.node_count();
  const WorldSet worlds(g, p, cfg.rollouts, derive_seed(cfg.rng_seed, kWorldStream, 0));
  const auto r = static_cast<Scalar>(worlds.size());

  auto reached_benefit = [&](const HardMask& seeds, std::size_t w) {
    const HardMask reached = rollout_in_world(g, worlds[w], seeds);
    Scalar total = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (reached[i]) total += cb.benefit[static_cast<Index>(i)];
    return total;
  };

  HardMask grow(n, 0);
  HardMask shrink(n, 1);
  std::vector<HardMask> grow_reached(worlds.size(), HardMask(n, 0));
  std::vector<Scalar> shrink_benefit(worlds.size());
  for (std::size_t w = 0; w < worlds.size(); ++w) shrink_benefit[w] = reached_benefit(shrink, w);

  std::vector<std::pair<Scalar, Node>> kept;
  std::vector<Node> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = static_cast<Node>(i);
    Scalar add_gain = 0;
    for (std::size_t w = 0; w < worlds.size(); ++w)
      add_gain += extra_benefit(g, worlds[w], cb.benefit, grow_reached[w], node, scratch);
    add_gain = add_gain / r - cb.cost[node];

    shrink[i] = 0;
    std::vector<Scalar> without(worlds.size());
    Scalar remove_gain = 0;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
      without[w] = reached_benefit(shrink, w);
      remove_gain += without[w] - shrink_benefit[w];
    }
    remove_gain = remove_gain / r + cb.cost[node];

    if (add_gain >= remove_gain) {
      shrink[i] = 1;
      grow[i] = 1;
      for (std::size_t w = 0; w < worlds.size(); ++w) grow_reached[w] = rollout_in_world(g, worlds[w], grow);
      kept.emplace_back(add_gain, node);
    } else {
      shrink_benefit = std::move(without);
    }
  }

  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [gain, node] : kept) {
    if (mask_cost(grow, cb.cost) <= budget) break;
    grow[static_cast<std::size_t>(node)] = 0;
  }
  return grow;
}

HardMask high_degree(const Graph& g, const CostBenefit& cb, Scalar budget) {
  check_costs(g, cb);
  std::vector<Node> order = all_nodes(g.node_count());
  std::stable_sort(order.begin(), order.end(), [&](Node a, Node b) { return g.degree(a) > g.degree(b); });
  return take_in_order(order, cb.cost, budget, g.node_count());
}

HardMask single_discount(const Graph& g, const CostBenefit& cb, Scalar budget) {
  check_costs(g, cb);
  std::vector<Scalar> degree(g.node_count());
  for (std::size_t v = 0; v < degree.size(); ++v) degree[v] = static_cast<Scalar>(g.degree(static_cast<Node>(v)));
  HardMask mask(g.node_count(), 0);
  Scalar spent = 0;
  while (true) {
    const Node u = best_affordable(mask, cb.cost, budget - spent, [&](Node v) { return degree[static_cast<std::size_t>(v)]; });
    if (u < 0) break;
    mask[static_cast<std::size_t>(u)] = 1;
    spent += cb.cost[u];
    for (Node v : g.neighbors(u)) degree[static_cast<std::size_t>(v)] -= 1;
  }
  return mask;
}

HardMask degree_discount(const Graph& g, const CostBenefit& cb, Scalar budget, Scalar p) {
  check_costs(g, cb);
  const std::size_t n = g.node_count();
  std::vector<Scalar> seeded(n, 0.0);
  std::vector<Scalar> score(n);
  for (std::size_t v = 0; v < n; ++v) score[v] = static_cast<Scalar>(g.degree(static_cast<Node>(v)));
  HardMask mask(n, 0);
  Scalar spent = 0;
  while (true) {
    const Node u = best_affordable(mask, cb.cost, budget - spent, [&](Node v) { return score[static_cast<std::size_t>(v)]; });
    if (u < 0) break;
    mask[static_cast<std::size_t>(u)] = 1;
    spent += cb.cost[u];
    for (Node v : g.neighbors(u)) {
      const auto i = static_cast<std::size_t>(v);
      if (mask[i]) continue;
      seeded[i] += 1;
      score[i] = degree_discount_score(static_cast<Scalar>(g.degree(v)), seeded[i], p);
    }
  }
  return mask;
}

VectorX clustering_coefficients(const Graph& g) {
  const std::size_t n = g.node_count();
  VectorX coeff = VectorX::Zero(static_cast<Index>(n));
  std::vector<std::uint8_t> marked(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(static_cast<Node>(u));
    const std::size_t d = nbrs.size();
    if (d < 2) continue;
    for (Node v : nbrs) marked[static_cast<std::size_t>(v)] = 1;
    std::size_t links = 0;
    for (Node v : nbrs)
      for (Node w : g.neighbors(v)) links += marked[static_cast<std::size_t>(w)];
    for (Node v : nbrs) marked[static_cast<std::size_t>(v)] = 0;
    // Each neighbor-neighbor link was seen from both ends.
    coeff[static_cast<Index>(u)] = static_cast<Scalar>(links) / static_cast<Scalar>(d * (d - 1));
  }
  return coeff;
}

HardMask high_clustering(const Graph& g, const CostBenefit& cb, Scalar budget) {
  check_costs(g, cb);
  const VectorX coeff = clustering_coefficients(g);
  std::vector<Node> order = all_nodes(g.node_count());
  std::stable_sort(order.begin(), order.end(), [&](Node a, Node b) {
    if (coeff[a] != coeff[b]) return coeff[a] > coeff[b];
    return g.degree(a) > g.degree(b);
  });
  return take_in_order(order, cb.cost, budget, g.node_count());
}

HardMask random_selection(const Graph& g, const CostBenefit& cb, Scalar budget, std::uint64_t rng_seed) {
  check_costs(g, cb);
  std::vector<Node> order = all_nodes(g.node_count());
  Rng rng(rng_seed);
  rng.shuffle(std::span<Node>(order));
  return take_in_order(order, cb.cost, budget, g.node_count());
}

}  // namespace deeppm
