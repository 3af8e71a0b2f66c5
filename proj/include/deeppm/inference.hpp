#pragma once

#include <cstdint>
#include <optional>

#include "deeppm/autoencoder.hpp"
#include "deeppm/checkpoint.hpp"
#include "deeppm/graph.hpp"
#include "deeppm/surrogate.hpp"

namespace deeppm {

struct InferenceConfig {
  /// Budget penalty weight; unset means 10 * max(b) / min(c).
  std::optional<Scalar> mu;
  std::size_t ascent_steps = 200;
  Scalar step_size = 0.05;
  std::size_t restarts = 8;
  std::size_t max_halvings = 5;
  /// Affordable candidates scored per rounding iteration before the best positive one is taken; 0 scores all.
  std::size_t candidate_cap = 64;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 0;

  void validate() const;
};

Scalar default_penalty(const VectorX& benefit, const VectorX& cost);

/// Everything the latent objective needs besides z.
struct LatentProblem {
  const SurrogateParams& theta;
  const AutoencoderParams& phi;
  const SparseOperator& a;
  const VectorX& benefit;
  const VectorX& cost;
  Scalar budget;
  Scalar mu;
};

/// b^T p̂(x̃) - c^T x̃ - μ [c^T x̃ - B]_+ with x̃ = σ(dec(z)).
Scalar penalized_objective(const VectorX& z, const LatentProblem& problem);

struct LatentEvaluation {
  Scalar value = 0;
  VectorX gradient;  // d value / d z
  VectorX x_soft;
};

/// Objective and its exact gradient in z. At c^T x̃ = B the hinge subgradient is taken as 0.
LatentEvaluation penalized_objective_and_gradient(const VectorX& z, const LatentProblem& problem);

struct LatentSearchResult {
  VectorX z;
  VectorX x_soft;
  Scalar objective = 0;
  std::size_t restart = 0;
};

/// Normalized-gradient ascent in z from `restarts` standard-normal starts.
/// Each step tries z + η g/|g| and halves η (at most max_halvings times)
/// until the objective improves; a step that never improves ends the
/// restart. Returns the best final point, lowest restart index on ties.
LatentSearchResult latent_ascent(const LatentProblem& problem, const InferenceConfig& cfg);

/// b^T p̂(x) - c^T x for a hard mask under the surrogate.
Scalar surrogate_profit(const SurrogateParams& theta, const SparseOperator& a, const VectorX& benefit,
                        const VectorX& cost, const HardMask& mask);

/// Rounds a soft mask to a budget-feasible hard one. Starting from the empty
/// set, each iteration scans affordable candidates in descending score
/// (ties by lower index), scoring their surrogate marginal profit; once
/// `candidate_cap` candidates are scored and one is positive, the best
/// positive one is added. Stops when no affordable candidate has positive
/// marginal profit.
HardMask greedy_round(const VectorX& x_soft, const SurrogateParams& theta, const SparseOperator& a,
                      const VectorX& benefit, const VectorX& cost, Scalar budget, std::size_t candidate_cap = 0);

struct SelectionDiagnostics {
  Scalar soft_objective = 0;
  Scalar surrogate_profit = 0;
  std::size_t seed_count = 0;
  Scalar cost_used = 0;
  Scalar mu = 0;
};

struct Selection {
  HardMask mask;
  SelectionDiagnostics diagnostics;
};

/// Latent ascent followed by greedy rounding for a trained checkpoint.
Selection select_seeds(const Graph& g, const CostBenefit& cb, Scalar budget, const Checkpoint& checkpoint,
                       const InferenceConfig& cfg);

}  // namespace deeppm
