#pragma once

#include <cstdint>
#include <vector>

#include "deeppm/autoencoder.hpp"
#include "deeppm/graph.hpp"
#include "deeppm/numerics.hpp"
#include "deeppm/surrogate.hpp"

namespace deeppm {

/// One teacher-labelled pair: a budget-feasible seed mask and the outcome of a single rollout from it.
struct TrainingSample {
  HardMask x;
  HardMask y;
};

struct TrainConfig {
  std::size_t masks = 400;
  std::size_t labels_per_mask = 5;
  std::size_t epochs = 300;
  std::size_t batch_size = 32;
  Scalar lambda_diff = 1.0;
  Scalar lambda_ae = 1.0;
  Index surrogate_hidden = 16;
  bool surrogate_bias = true;
  bool surrogate_passthrough = true;
  Index ae_hidden = 64;
  Index latent_dim = 16;
  AdamConfig adam;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 0;

  void validate() const;
};

/// Draws `cfg.masks` budget-feasible masks and labels each with
/// `cfg.labels_per_mask` independent teacher rollouts. Mask m draws a target
/// size k uniformly from [1, floor(B / min cost)] and adds shuffled nodes
/// while the budget admits them, stopping at k.
std::vector<TrainingSample> generate_training_set(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb,
                                                  Scalar budget, const TrainConfig& cfg, std::uint64_t rng_seed);

struct EpochLoss {
  std::size_t epoch = 0;
  Scalar diffusion = 0;
  Scalar reconstruction = 0;
  Scalar total = 0;
};

struct TrainResult {
  SurrogateParams theta;
  AutoencoderParams phi;
  /// Entry 0 is the corpus loss at initialization; entry e the loss after epoch e.
  std::vector<EpochLoss> history;
};

/// Initial parameters for `cfg`: surrogate and autoencoder come from separate seed streams.
SurrogateParams initial_surrogate(const TrainConfig& cfg);
AutoencoderParams initial_autoencoder(Index node_count, const TrainConfig& cfg);

/// Minimizes λ_diff L_diff(θ) + λ_AE L_AE(φ) with Adam over shuffled mini-batches.
TrainResult train(const std::vector<TrainingSample>& samples, const SparseOperator& a, const TrainConfig& cfg);

/// Corpus losses of the given parameters, evaluated in chunks.
EpochLoss corpus_loss(const SurrogateParams& theta, const AutoencoderParams& phi, const SparseOperator& a,
                      const std::vector<TrainingSample>& samples, const TrainConfig& cfg);

}  // namespace deeppm
