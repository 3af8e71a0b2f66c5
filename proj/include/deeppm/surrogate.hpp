#pragma once

#include <cstdint>

#include "deeppm/numerics.hpp"
#include "deeppm/types.hpp"

namespace deeppm {

/// Two-layer GCN student: H1 = ReLU(Â X W1 + b1), p̂ = σ(Â H1 W2 + b2).
///
/// X holds one seed mask per column. With zero biases this is the plain
/// bias-free layout; `use_bias` controls whether training moves them.
///
/// With `seed_passthrough` the readout is p̂ = x + (1 - x) ⊙ σ(logits):
/// seeded nodes are active by construction and the network only models the
/// spread to the rest.
struct SurrogateParams {
  MatrixX w1;  // 1 x H
  VectorX b1;  // H
  MatrixX w2;  // H x 1
  VectorX b2;  // 1
  bool use_bias = true;
  bool seed_passthrough = true;

  Index hidden() const { return w1.cols(); }

  static SurrogateParams zeros(Index hidden, bool use_bias = true, bool seed_passthrough = true);
  /// Glorot-uniform weights from a seeded stream, zero biases.
  static SurrogateParams glorot(Index hidden, std::uint64_t rng_seed, bool use_bias = true,
                                bool seed_passthrough = true);

  template <typename Fn>
  void for_each_block(Fn&& fn) {
    fn(w1);
    fn(b1);
    fn(w2);
    fn(b2);
  }
  template <typename Fn>
  void for_each_block(Fn&& fn) const {
    fn(w1);
    fn(b1);
    fn(w2);
    fn(b2);
  }
};

/// Intermediates kept for the backward pass. Hidden blocks are laid out
/// column-wise: columns [t*H, (t+1)*H) belong to sample t.
struct SurrogateCache {
  MatrixX ax;      // Â X, N x B
  MatrixX pre1;    // Â X W1 + b1, N x BH
  MatrixX ah1;     // Â H1, N x BH
  MatrixX gate;    // σ(logits), N x B
  MatrixX prob;    // p̂, N x B
};

SurrogateCache surrogate_forward(const SurrogateParams& theta, const SparseOperator& a, const MatrixX& x);

/// p̂ for a single mask.
VectorX surrogate_predict(const SurrogateParams& theta, const SparseOperator& a, const VectorX& x);

struct SurrogateLoss {
  Scalar loss = 0;
  SurrogateParams grad;
};

/// Mean BCE over every node of every sample (columns of x and y) and its
/// gradient with respect to all parameter blocks.
SurrogateLoss surrogate_loss_and_grads(const SurrogateParams& theta, const SparseOperator& a, const MatrixX& x,
                                       const MatrixX& y);

/// ∇_x (weight^T p̂(x)), the vector-Jacobian product J_p̂(x)^T weight.
VectorX surrogate_input_gradient(const SurrogateParams& theta, const SparseOperator& a, const VectorX& x,
                                 const VectorX& weight);

/// Multiply-add count of one forward pass over `batch` masks; linear in nnz(Â).
std::size_t surrogate_forward_ops(const SurrogateParams& theta, const SparseOperator& a, Index batch);

}  // namespace deeppm
