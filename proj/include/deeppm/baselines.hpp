#pragma once

#include <cstdint>

#include "deeppm/diffusion.hpp"
#include "deeppm/graph.hpp"

namespace deeppm {

struct BaselineConfig {
  /// Live-edge worlds per marginal-gain estimate.
  std::size_t rollouts = 200;
  /// Fraction of remaining nodes sampled per stochastic-greedy round.
  Scalar sample_fraction = 0.1;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 0;

  void validate() const;
};

/// Greedy on Monte Carlo profit. Round r scores every affordable node against
/// a fresh world set seeded by (rng_seed, r) and adds the best one; stops
/// when no affordable node has positive marginal profit.
HardMask simple_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                       const BaselineConfig& cfg);

/// simple_greedy restricted each round to ceil(fraction * |V \ S|) nodes
/// sampled uniformly from the unselected ones. Stops when the sample holds
/// no affordable node with positive gain.
HardMask stochastic_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                           const BaselineConfig& cfg);

/// Deterministic double greedy over nodes in index order on a single world
/// set, then a repair pass that drops kept nodes in ascending order of
/// their recorded marginal profit until the budget holds.
HardMask double_greedy(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, Scalar budget,
                       const BaselineConfig& cfg);

HardMask high_degree(const Graph& g, const CostBenefit& cb, Scalar budget);
HardMask single_discount(const Graph& g, const CostBenefit& cb, Scalar budget);
HardMask degree_discount(const Graph& g, const CostBenefit& cb, Scalar budget, Scalar p);

/// dd_v = d_v - 2 t_v - (d_v - t_v) t_v p.
constexpr Scalar degree_discount_score(Scalar degree, Scalar seeded_neighbors, Scalar p) {
  return degree - 2 * seeded_neighbors - (degree - seeded_neighbors) * seeded_neighbors * p;
}

/// Local clustering coefficient on the undirected collapse; 0 for degree < 2.
VectorX clustering_coefficients(const Graph& g);
HardMask high_clustering(const Graph& g, const CostBenefit& cb, Scalar budget);

HardMask random_selection(const Graph& g, const CostBenefit& cb, Scalar budget, std::uint64_t rng_seed);

}  // namespace deeppm
