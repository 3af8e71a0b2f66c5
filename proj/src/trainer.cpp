#include "deeppm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deeppm/diffusion.hpp"
#include "deeppm/parallel.hpp"
#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

constexpr std::uint64_t kMaskStream = 0;
constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kSurrogateInit = 2;
constexpr std::uint64_t kAutoencoderInit = 3;
constexpr std::uint64_t kShuffleStream = 4;

void gather(const std::vector<TrainingSample>& samples, std::span<const std::size_t> idx, Index n, MatrixX& x,
            MatrixX* y) {
  x.resize(n, static_cast<Index>(idx.size()));
  if (y) y->resize(n, static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const auto& s = samples[idx[c]];
    for (Index i = 0; i < n; ++i) {
      x(i, static_cast<Index>(c)) = s.x[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      if (y) (*y)(i, static_cast<Index>(c)) = s.y[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
  }
}

template <typename Params>
std::vector<Eigen::Map<MatrixX>> views_of(Params& params) {
  std::vector<Eigen::Map<MatrixX>> views;
  params.for_each_block([&](auto& block) { views.emplace_back(block.data(), block.rows(), block.cols()); });
  return views;
}

template <typename Params>
void adam_update(Params& params, Params& grad, Scalar scale, std::vector<AdamState<Scalar>>& states,
                 const AdamConfig& cfg) {
  auto p = views_of(params);
  auto g = views_of(grad);
  if (states.empty()) states.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    g[k] *= scale;
    adam_step(p[k], g[k], states[k], cfg);
  }
}

}  // namespace

void TrainConfig::validate() const {
  require(masks >= 1 && labels_per_mask >= 1, "training corpus must have at least one sample");
  require(batch_size >= 1, "batch size must be at least 1");
  require(lambda_diff >= 0 && lambda_ae >= 0, "loss weights must be non-negative");
  require(surrogate_hidden >= 1 && ae_hidden >= 1 && latent_dim >= 1, "network widths must be positive");
  require(adam.learning_rate > 0, "learning rate must be positive");
}

std::vector<TrainingSample> generate_training_set(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb,
                                                  Scalar budget, const TrainConfig& cfg, std::uint64_t rng_seed) {
  cfg.validate();
  const std::size_t n = g.node_count();
  require_shape(static_cast<std::size_t>(cb.cost.size()) == n, "cost vector must have one entry per node");
  const Scalar min_cost = cb.cost.minCoeff();
  if (!(budget >= min_cost) || budget <= 0)
    throw ValidationError("budget admits no non-empty seed mask (min node cost " + std::to_string(min_cost) + ")");
  const auto k_max = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(budget / min_cost)));

  std::vector<HardMask> masks(cfg.masks);
  for (std::size_t m = 0; m < cfg.masks; ++m) {
    Rng rng(derive_seed(rng_seed, kMaskStream, m));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(k_max));
    std::vector<Node> order(n);
    std::iota(order.begin(), order.end(), Node{0});
    rng.shuffle(std::span<Node>(order));
    HardMask mask(n, 0);
    Scalar spent = 0;
    std::size_t size = 0;
    for (Node v : order) {
      if (size == k) break;
      const Scalar c = cb.cost[v];
      if (spent + c <= budget) {
        mask[static_cast<std::size_t>(v)] = 1;
        spent += c;
        ++size;
      }
    }
    masks[m] = std::move(mask);
  }

  const std::size_t labels = cfg.labels_per_mask;
  std::vector<TrainingSample> samples(cfg.masks * labels);
  parallel_chunks(cfg.masks, cfg.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      for (std::size_t l = 0; l < labels; ++l) {
        Rng rng(derive_seed(rng_seed, kLabelStream, m * labels + l));
        samples[m * labels + l] = TrainingSample{masks[m], rollout(g, p, masks[m], rng)};
      }
    }
  });
  return samples;
}

SurrogateParams initial_surrogate(const TrainConfig& cfg) {
  return SurrogateParams::glorot(cfg.surrogate_hidden, derive_seed(cfg.rng_seed, kSurrogateInit), cfg.surrogate_bias,
                                 cfg.surrogate_passthrough);
}

AutoencoderParams initial_autoencoder(Index node_count, const TrainConfig& cfg) {
  return AutoencoderParams::glorot(node_count, cfg.ae_hidden, cfg.latent_dim, derive_seed(cfg.rng_seed, kAutoencoderInit));
}

EpochLoss corpus_loss(const SurrogateParams& theta, const AutoencoderParams& phi, const SparseOperator& a,
                      const std::vector<TrainingSample>& samples, const TrainConfig& cfg) {
  require(!samples.empty(), "corpus loss: no samples");
  const Index n = a.rows();
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  EpochLoss out;
  MatrixX x;
  MatrixX y;
  for (std::size_t begin = 0; begin < idx.size(); begin += cfg.batch_size) {
    const std::size_t end = std::min(idx.size(), begin + cfg.batch_size);
    gather(samples, std::span<const std::size_t>(idx).subspan(begin, end - begin), n, x, &y);
    const auto weight = static_cast<Scalar>(end - begin);
    out.diffusion += weight * bce(surrogate_forward(theta, a, x).prob, y);
    out.reconstruction += weight * bce(decode(phi, encode(phi, x)), x);
  }
  out.diffusion /= static_cast<Scalar>(samples.size());
  out.reconstruction /= static_cast<Scalar>(samples.size());
  out.total = cfg.lambda_diff * out.diffusion + cfg.lambda_ae * out.reconstruction;
  return out;
}

TrainResult train(const std::vector<TrainingSample>& samples, const SparseOperator& a, const TrainConfig& cfg) {
  cfg.validate();
  require(!samples.empty(), "train: no samples");
  const Index n = a.rows();
  for (const auto& s : samples)
    require_shape(static_cast<Index>(s.x.size()) == n && static_cast<Index>(s.y.size()) == n,
                  "train: sample length must equal node count");

  TrainResult result{initial_surrogate(cfg), initial_autoencoder(n, cfg), {}};
  result.history.push_back(corpus_loss(result.theta, result.phi, a, samples, cfg));

  std::vector<AdamState<Scalar>> theta_state;
  std::vector<AdamState<Scalar>> phi_state;

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  MatrixX x;
  MatrixX y;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(derive_seed(cfg.rng_seed, kShuffleStream, epoch));
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      gather(samples, std::span<const std::size_t>(order).subspan(begin, end - begin), n, x, &y);
      if (cfg.lambda_diff > 0) {
        auto step = surrogate_loss_and_grads(result.theta, a, x, y);
        if (!cfg.surrogate_bias) {
          // Zero bias gradients keep Adam from moving the biases.
          step.grad.b1.setZero();
          step.grad.b2.setZero();
        }
        adam_update(result.theta, step.grad, cfg.lambda_diff, theta_state, cfg.adam);
      }
      if (cfg.lambda_ae > 0) {
        auto step = recon_loss_and_grads(result.phi, x);
        adam_update(result.phi, step.grad, cfg.lambda_ae, phi_state, cfg.adam);
      }
    }
    auto loss = corpus_loss(result.theta, result.phi, a, samples, cfg);
    loss.epoch = epoch;
    result.history.push_back(loss);
  }
  return result;
}

}  // namespace deeppm
