#pragma once

#include <cstdint>
#include <vector>

#include "deeppm/graph.hpp"
#include "deeppm/rng.hpp"

namespace deeppm {

/// One Independent Cascade run in discrete waves. Every newly active node
/// gets a single attempt on each inactive out-neighbor. Returns the final
/// activation mask; seeds are always active.
HardMask rollout(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds, Rng& rng);

/// Per-node activation frequency over `rollouts` runs. Rollout r draws from
/// stream derive_seed(rng_seed, r), so the result does not depend on `workers`.
VectorX estimate_activation(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds,
                            std::size_t rollouts, std::uint64_t rng_seed, std::size_t workers = 0);

struct ProfitEstimate {
  Scalar expected_benefit = 0;
  Scalar seed_cost = 0;
  Scalar profit = 0;
  Scalar std_error = 0;
  std::size_t rollouts = 0;
};

/// Teacher profit b^T p(x) - c^T x. std_error is the standard error of the
/// per-rollout earned benefit.
ProfitEstimate evaluate_profit(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb,
                               const HardMask& seeds, std::size_t rollouts, std::uint64_t rng_seed,
                               std::size_t workers = 0);

/// Live-edge realization: arc a is live with probability p[a].
struct LiveEdgeWorld {
  std::vector<std::uint8_t> live;
};

LiveEdgeWorld sample_world(const Graph& g, const EdgeProbabilities& p, Rng& rng);

/// Nodes reachable from the seeds through live arcs.
HardMask rollout_in_world(const Graph& g, const LiveEdgeWorld& world, const HardMask& seeds);

/// A fixed set of sampled worlds shared by every candidate compared in one
/// round (common random numbers). Profits are means over the worlds.
class WorldSet {
 public:
  WorldSet(const Graph& g, const EdgeProbabilities& p, std::size_t count, std::uint64_t rng_seed);

  std::size_t size() const { return worlds_.size(); }
  const LiveEdgeWorld& operator[](std::size_t i) const { return worlds_[i]; }

  /// Mean benefit of nodes reachable from `seeds`, minus the seed cost.
  Scalar profit(const Graph& g, const CostBenefit& cb, const HardMask& seeds) const;

 private:
  std::vector<LiveEdgeWorld> worlds_;
};

/// Benefit of the nodes that `candidate` reaches through live arcs and that
/// are not yet marked in `active`. `active` is restored before returning;
/// `scratch` is reused between calls.
Scalar extra_benefit(const Graph& g, const LiveEdgeWorld& world, const VectorX& benefit, std::vector<std::uint8_t>& active,
                     Node candidate, std::vector<Node>& scratch);

}  // namespace deeppm
