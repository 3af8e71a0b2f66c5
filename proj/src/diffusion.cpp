#include "deeppm/diffusion.hpp"

#include <cmath>

#include "deeppm/parallel.hpp"

namespace deeppm {

namespace {

void check_inputs(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds) {
  require_shape(seeds.size() == g.node_count(), "seed mask length must equal node count");
  require_shape(p.size() == g.arc_count(), "edge probabilities must cover every arc");
}

// Runs rollouts [begin, end) and accumulates activation counts and per-rollout earned benefit.
void run_rollouts(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds, std::uint64_t rng_seed,
                  std::size_t begin, std::size_t end, std::vector<std::uint64_t>& counts, const VectorX* benefit,
                  std::vector<Scalar>* earned) {
  for (std::size_t r = begin; r < end; ++r) {
    Rng rng(derive_seed(rng_seed, r));
    const HardMask y = rollout(g, p, seeds, rng);
    Scalar total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!y[i]) continue;
      ++counts[i];
      if (benefit) total += (*benefit)[static_cast<Index>(i)];
    }
    if (earned) (*earned)[r] = total;
  }
}

std::vector<std::uint64_t> activation_counts(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds,
                                             std::size_t rollouts, std::uint64_t rng_seed, std::size_t workers,
                                             const VectorX* benefit, std::vector<Scalar>* earned) {
  const std::size_t w = std::min(resolve_workers(workers), std::max<std::size_t>(rollouts, 1));
  std::vector<std::vector<std::uint64_t>> partial(w, std::vector<std::uint64_t>(g.node_count(), 0));
  parallel_chunks(rollouts, w, [&](std::size_t worker, std::size_t begin, std::size_t end) {
    run_rollouts(g, p, seeds, rng_seed, begin, end, partial[worker], benefit, earned);
  });
  std::vector<std::uint64_t> counts(g.node_count(), 0);
  for (const auto& part : partial)
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
  return counts;
}

}  // namespace

HardMask rollout(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds, Rng& rng) {
  check_inputs(g, p, seeds);
  HardMask active(seeds);
  std::vector<Node> wave;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (seeds[i]) wave.push_back(static_cast<Node>(i));

  std::vector<Node> next;
  while (!wave.empty()) {
    next.clear();
    for (Node u : wave) {
      const auto targets = g.out_neighbors(u);
      const std::size_t base = g.arc_begin(u);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const Node v = targets[k];
        if (active[static_cast<std::size_t>(v)]) continue;
        if (rng.uniform() < p[base + k]) {
          active[static_cast<std::size_t>(v)] = 1;
          next.push_back(v);
        }
      }
    }
    wave.swap(next);
  }
  return active;
}

VectorX estimate_activation(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds, std::size_t rollouts,
                            std::uint64_t rng_seed, std::size_t workers) {
  require(rollouts >= 1, "rollout count must be at least 1");
  check_inputs(g, p, seeds);
  const auto counts = activation_counts(g, p, seeds, rollouts, rng_seed, workers, nullptr, nullptr);
  VectorX out(static_cast<Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[static_cast<Index>(i)] = static_cast<Scalar>(counts[i]) / static_cast<Scalar>(rollouts);
  return out;
}

ProfitEstimate evaluate_profit(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb,
                               const HardMask& seeds, std::size_t rollouts, std::uint64_t rng_seed,
                               std::size_t workers) {
  require(rollouts >= 1, "rollout count must be at least 1");
  check_inputs(g, p, seeds);
  require_shape(static_cast<std::size_t>(cb.benefit.size()) == g.node_count() &&
                    static_cast<std::size_t>(cb.cost.size()) == g.node_count(),
                "cost/benefit vectors must have one entry per node");

  std::vector<Scalar> earned(rollouts, 0.0);
  const auto counts = activation_counts(g, p, seeds, rollouts, rng_seed, workers, &cb.benefit, &earned);

  ProfitEstimate est;
  est.rollouts = rollouts;
  const auto r = static_cast<Scalar>(rollouts);
  for (std::size_t i = 0; i < counts.size(); ++i)
    est.expected_benefit += cb.benefit[static_cast<Index>(i)] * (static_cast<Scalar>(counts[i]) / r);
  est.seed_cost = mask_cost(seeds, cb.cost);
  est.profit = est.expected_benefit - est.seed_cost;

  if (rollouts > 1) {
    Scalar mean = 0;
    for (Scalar e : earned) mean += e;
    mean /= r;
    Scalar ss = 0;
    for (Scalar e : earned) ss += (e - mean) * (e - mean);
    est.std_error = std::sqrt(ss / (r - 1.0) / r);
  }
  return est;
}

LiveEdgeWorld sample_world(const Graph& g, const EdgeProbabilities& p, Rng& rng) {
  require_shape(p.size() == g.arc_count(), "edge probabilities must cover every arc");
  LiveEdgeWorld world;
  world.live.resize(g.arc_count());
  for (std::size_t a = 0; a < world.live.size(); ++a) world.live[a] = rng.uniform() < p[a] ? 1 : 0;
  return world;
}

HardMask rollout_in_world(const Graph& g, const LiveEdgeWorld& world, const HardMask& seeds) {
  require_shape(seeds.size() == g.node_count(), "seed mask length must equal node count");
  require_shape(world.live.size() == g.arc_count(), "world must cover every arc");
  HardMask reached(seeds);
  std::vector<Node> stack;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (seeds[i]) stack.push_back(static_cast<Node>(i));
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    const auto targets = g.out_neighbors(u);
    const std::size_t base = g.arc_begin(u);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto v = static_cast<std::size_t>(targets[k]);
      if (world.live[base + k] && !reached[v]) {
        reached[v] = 1;
        stack.push_back(targets[k]);
      }
    }
  }
  return reached;
}

WorldSet::WorldSet(const Graph& g, const EdgeProbabilities& p, std::size_t count, std::uint64_t rng_seed) {
  require(count >= 1, "world count must be at least 1");
  worlds_.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    Rng rng(derive_seed(rng_seed, w));
    worlds_.push_back(sample_world(g, p, rng));
  }
}

Scalar WorldSet::profit(const Graph& g, const CostBenefit& cb, const HardMask& seeds) const {
  Scalar total = 0;
  for (const auto& world : worlds_) {
    const HardMask reached = rollout_in_world(g, world, seeds);
    for (std::size_t i = 0; i < reached.size(); ++i)
      if (reached[i]) total += cb.benefit[static_cast<Index>(i)];
  }
  return total / static_cast<Scalar>(worlds_.size()) - mask_cost(seeds, cb.cost);
}

Scalar extra_benefit(const Graph& g, const LiveEdgeWorld& world, const VectorX& benefit, std::vector<std::uint8_t>& active,
                     Node candidate, std::vector<Node>& scratch) {
  const auto c = static_cast<std::size_t>(candidate);
  if (active[c]) return 0;
  scratch.clear();
  scratch.push_back(candidate);
  active[c] = 1;
  Scalar gained = benefit[candidate];
  for (std::size_t head = 0; head < scratch.size(); ++head) {
    const Node u = scratch[head];
    const auto targets = g.out_neighbors(u);
    const std::size_t base = g.arc_begin(u);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto v = static_cast<std::size_t>(targets[k]);
      if (world.live[base + k] && !active[v]) {
        active[v] = 1;
        gained += benefit[targets[k]];
        scratch.push_back(targets[k]);
      }
    }
  }
  for (Node v : scratch) active[static_cast<std::size_t>(v)] = 0;
  return gained;
}

}  // namespace deeppm
