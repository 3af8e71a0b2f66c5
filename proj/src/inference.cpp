#include "deeppm/inference.hpp"

#include <algorithm>
#include <numeric>

#include "deeppm/parallel.hpp"
#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

void check_problem(const LatentProblem& problem) {
  const Index n = problem.a.rows();
  require_shape(problem.phi.node_count() == n, "autoencoder node count must match the graph");
  require_shape(problem.benefit.size() == n && problem.cost.size() == n, "benefit/cost length must match the graph");
  require(problem.mu >= 0, "penalty weight must be non-negative");
}

Scalar objective_at(const LatentProblem& problem, const VectorX& x_soft, const VectorX& p_hat) {
  const Scalar spend = problem.cost.dot(x_soft);
  return problem.benefit.dot(p_hat) - spend - problem.mu * std::max(Scalar(0), spend - problem.budget);
}

}  // namespace

void InferenceConfig::validate() const {
  require(!mu || *mu >= 0, "penalty weight must be non-negative");
  require(restarts >= 1, "restarts must be at least 1");
  require(step_size > 0, "ascent step size must be positive");
}

Scalar default_penalty(const VectorX& benefit, const VectorX& cost) {
  require(cost.size() > 0 && cost.minCoeff() > 0, "costs must be positive");
  return 10.0 * benefit.maxCoeff() / cost.minCoeff();
}

Scalar penalized_objective(const VectorX& z, const LatentProblem& problem) {
  check_problem(problem);
  const VectorX x_soft = decode(problem.phi, z);
  return objective_at(problem, x_soft, surrogate_predict(problem.theta, problem.a, x_soft));
}

LatentEvaluation penalized_objective_and_gradient(const VectorX& z, const LatentProblem& problem) {
  check_problem(problem);
  LatentEvaluation out;
  out.x_soft = decode(problem.phi, z);
  out.value = objective_at(problem, out.x_soft, surrogate_predict(problem.theta, problem.a, out.x_soft));

  VectorX dx = surrogate_input_gradient(problem.theta, problem.a, out.x_soft, problem.benefit) - problem.cost;
  if (problem.cost.dot(out.x_soft) > problem.budget) dx -= problem.mu * problem.cost;
  out.gradient = decode_vjp(problem.phi, z, dx);
  return out;
}

LatentSearchResult latent_ascent(const LatentProblem& problem, const InferenceConfig& cfg) {
  cfg.validate();
  check_problem(problem);
  const Index latent = problem.phi.latent();
  std::vector<LatentSearchResult> runs(cfg.restarts);

  parallel_chunks(cfg.restarts, cfg.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(derive_seed(cfg.rng_seed, r));
      VectorX z(latent);
      for (Index k = 0; k < latent; ++k) z[k] = rng.normal();

      LatentEvaluation current = penalized_objective_and_gradient(z, problem);
      for (std::size_t step = 0; step < cfg.ascent_steps; ++step) {
        const Scalar norm = current.gradient.norm();
        if (!(norm > 0)) break;
        Scalar eta = cfg.step_size;
        bool moved = false;
        for (std::size_t h = 0; h <= cfg.max_halvings; ++h, eta *= 0.5) {
          const VectorX candidate = z + (eta / norm) * current.gradient;
          if (penalized_objective(candidate, problem) > current.value) {
            z = candidate;
            current = penalized_objective_and_gradient(z, problem);
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      runs[r] = LatentSearchResult{z, current.x_soft, current.value, r};
    }
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].objective > runs[best].objective) best = r;
  return runs[best];
}

Scalar surrogate_profit(const SurrogateParams& theta, const SparseOperator& a, const VectorX& benefit,
                        const VectorX& cost, const HardMask& mask) {
  const VectorX x = to_soft(mask);
  return benefit.dot(surrogate_predict(theta, a, x)) - cost.dot(x);
}

HardMask greedy_round(const VectorX& x_soft, const SurrogateParams& theta, const SparseOperator& a,
                      const VectorX& benefit, const VectorX& cost, Scalar budget, std::size_t candidate_cap) {
  const Index n = a.rows();
  require_shape(x_soft.size() == n && benefit.size() == n && cost.size() == n, "rounding: vector lengths must match");

  std::vector<Node> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Node{0});
  std::stable_sort(order.begin(), order.end(), [&](Node i, Node j) { return x_soft[i] > x_soft[j]; });

  const std::size_t chunk = candidate_cap > 0 ? candidate_cap : 64;
  HardMask mask(static_cast<std::size_t>(n), 0);
  VectorX x = VectorX::Zero(n);
  Scalar spent = 0;
  Scalar current = benefit.dot(surrogate_predict(theta, a, x));

  for (Index iteration = 0; iteration < n; ++iteration) {
    Node best = -1;
    Scalar best_value = current;
    std::size_t scored = 0;
    std::vector<Node> pending;
    auto flush = [&] {
      if (pending.empty()) return;
      MatrixX batch = x.replicate(1, static_cast<Index>(pending.size()));
      for (std::size_t k = 0; k < pending.size(); ++k) batch(pending[k], static_cast<Index>(k)) = 1.0;
      const VectorX earned = (surrogate_forward(theta, a, batch).prob.transpose() * benefit);
      for (std::size_t k = 0; k < pending.size(); ++k) {
        // Beating `current` means b^T p̂(S+v) - c_v - b^T p̂(S) > 0.
        const Scalar value = earned[static_cast<Index>(k)] - cost[pending[k]];
        if (value > best_value) {
          best_value = value;
          best = pending[k];
        }
      }
      scored += pending.size();
      pending.clear();
    };
    for (Node v : order) {
      if (mask[static_cast<std::size_t>(v)] || spent + cost[v] > budget) continue;
      pending.push_back(v);
      if (pending.size() == chunk) {
        flush();
        if (candidate_cap > 0 && scored >= candidate_cap && best >= 0) break;
      }
    }
    flush();
    if (best < 0) break;
    mask[static_cast<std::size_t>(best)] = 1;
    x[best] = 1.0;
    spent += cost[best];
    current = benefit.dot(surrogate_predict(theta, a, x));
  }
  return mask;
}

Selection select_seeds(const Graph& g, const CostBenefit& cb, Scalar budget, const Checkpoint& checkpoint,
                       const InferenceConfig& cfg) {
  if (checkpoint.node_count != g.node_count() || checkpoint.phi.node_count() != static_cast<Index>(g.node_count())) {
    throw ShapeError("checkpoint was trained on " + std::to_string(checkpoint.node_count) +
                     " nodes but the graph has " + std::to_string(g.node_count()));
  }
  const SparseOperator a = normalized_operator(g);
  const Scalar mu = cfg.mu.value_or(default_penalty(cb.benefit, cb.cost));
  const LatentProblem problem{checkpoint.theta, checkpoint.phi, a, cb.benefit, cb.cost, budget, mu};
  const LatentSearchResult search = latent_ascent(problem, cfg);

  Selection out;
  out.mask = greedy_round(search.x_soft, checkpoint.theta, a, cb.benefit, cb.cost, budget, cfg.candidate_cap);
  out.diagnostics.soft_objective = search.objective;
  out.diagnostics.surrogate_profit = surrogate_profit(checkpoint.theta, a, cb.benefit, cb.cost, out.mask);
  out.diagnostics.seed_count = mask_count(out.mask);
  out.diagnostics.cost_used = mask_cost(out.mask, cb.cost);
  out.diagnostics.mu = mu;
  return out;
}

}  // namespace deeppm
