#include "deeppm/surrogate.hpp"

#include <cmath>

#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

MatrixX glorot_block(Index rows, Index cols, Rng& rng) {
  const Scalar limit = std::sqrt(6.0 / static_cast<Scalar>(rows + cols));
  MatrixX m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-limit, limit);
  return m;
}

void check_shapes(const SurrogateParams& theta, const SparseOperator& a, const MatrixX& x) {
  require_shape(theta.w1.rows() == 1 && theta.hidden() >= 1, "surrogate: W1 must be 1 x H with H >= 1");
  require_shape(theta.w2.rows() == theta.hidden() && theta.w2.cols() == 1, "surrogate: W2 must be H x 1");
  require_shape(theta.b1.size() == theta.hidden() && theta.b2.size() == 1, "surrogate: bias shapes");
  require_shape(a.rows() == a.cols(), "surrogate: operator must be square");
  require_shape(x.rows() == a.rows(), "surrogate: mask length must equal node count");
}

// Backward pass from dL/dlogits. Fills parameter gradients and, if requested, dL/dX.
void backward(const SurrogateParams& theta, const SparseOperator& a, const SurrogateCache& cache,
              const MatrixX& dlogits, SurrogateParams* grad, MatrixX* dx) {
  const Index n = a.rows();
  const Index h = theta.hidden();
  const Index batch = dlogits.cols();

  MatrixX dah1(n, batch * h);
  for (Index t = 0; t < batch; ++t) dah1.middleCols(t * h, h).noalias() = dlogits.col(t) * theta.w2.transpose();
  MatrixX dpre1 = a.transpose() * dah1;
  dpre1 = dpre1.cwiseProduct((cache.pre1.array() > 0).cast<Scalar>().matrix());

  if (grad) {
    *grad = SurrogateParams::zeros(h, theta.use_bias, theta.seed_passthrough);
    for (Index t = 0; t < batch; ++t) {
      grad->w2.noalias() += cache.ah1.middleCols(t * h, h).transpose() * dlogits.col(t);
      grad->w1.noalias() += cache.ax.col(t).transpose() * dpre1.middleCols(t * h, h);
      grad->b1 += dpre1.middleCols(t * h, h).colwise().sum().transpose();
    }
    grad->b2[0] = dlogits.sum();
  }
  if (dx) {
    MatrixX dax(n, batch);
    for (Index t = 0; t < batch; ++t) dax.col(t).noalias() = dpre1.middleCols(t * h, h) * theta.w1.transpose();
    *dx = a.transpose() * dax;
  }
}

}  // namespace

SurrogateParams SurrogateParams::zeros(Index hidden, bool use_bias, bool seed_passthrough) {
  return SurrogateParams{MatrixX::Zero(1, hidden), VectorX::Zero(hidden), MatrixX::Zero(hidden, 1), VectorX::Zero(1),
                         use_bias, seed_passthrough};
}

SurrogateParams SurrogateParams::glorot(Index hidden, std::uint64_t rng_seed, bool use_bias, bool seed_passthrough) {
  require(hidden >= 1, "surrogate hidden width must be at least 1");
  Rng rng(rng_seed);
  SurrogateParams theta = zeros(hidden, use_bias, seed_passthrough);
  theta.w1 = glorot_block(1, hidden, rng);
  theta.w2 = glorot_block(hidden, 1, rng);
  return theta;
}

SurrogateCache surrogate_forward(const SurrogateParams& theta, const SparseOperator& a, const MatrixX& x) {
  check_shapes(theta, a, x);
  const Index n = a.rows();
  const Index h = theta.hidden();
  const Index batch = x.cols();

  SurrogateCache cache;
  cache.ax = a * x;
  cache.pre1.resize(n, batch * h);
  for (Index t = 0; t < batch; ++t) {
    cache.pre1.middleCols(t * h, h).noalias() = cache.ax.col(t) * theta.w1;
    cache.pre1.middleCols(t * h, h).rowwise() += theta.b1.transpose();
  }
  cache.ah1 = a * relu(cache.pre1);
  MatrixX logits(n, batch);
  for (Index t = 0; t < batch; ++t)
    logits.col(t).noalias() = cache.ah1.middleCols(t * h, h) * theta.w2;
  logits.array() += theta.b2[0];
  cache.gate = sigmoid(logits);
  if (theta.seed_passthrough)
    cache.prob = x.array() + (1.0 - x.array()) * cache.gate.array();
  else
    cache.prob = cache.gate;
  return cache;
}

VectorX surrogate_predict(const SurrogateParams& theta, const SparseOperator& a, const VectorX& x) {
  return surrogate_forward(theta, a, x).prob.col(0);
}

SurrogateLoss surrogate_loss_and_grads(const SurrogateParams& theta, const SparseOperator& a, const MatrixX& x,
                                       const MatrixX& y) {
  require(x.cols() >= 1, "surrogate loss: empty batch");
  require_shape(y.rows() == x.rows() && y.cols() == x.cols(), "surrogate loss: label shape mismatch");
  const SurrogateCache cache = surrogate_forward(theta, a, x);
  SurrogateLoss out;
  out.loss = bce(cache.prob, y);
  // With pass-through, 1 - p̂ = (1 - x)(1 - σ), so dL/dlogit = (p̂ - y) σ / p̂;
  // entries pinned at 1 by a seed sit in the flat clamp region of the loss.
  MatrixX dlogits = cache.prob - y;
  if (theta.seed_passthrough) {
    dlogits = dlogits.cwiseProduct(cache.gate.cwiseQuotient(cache.prob));
    dlogits = (cache.prob.array() > 1.0 - kProbClamp).select(0.0, dlogits);
  }
  dlogits /= static_cast<Scalar>(y.size());
  backward(theta, a, cache, dlogits, &out.grad, nullptr);
  return out;
}

VectorX surrogate_input_gradient(const SurrogateParams& theta, const SparseOperator& a, const VectorX& x,
                                 const VectorX& weight) {
  require_shape(weight.size() == a.rows(), "input gradient: weight length must equal node count");
  const SurrogateCache cache = surrogate_forward(theta, a, x);
  const auto s = cache.gate.col(0).array();
  VectorX dlogits = weight.array() * s * (1.0 - s);
  if (theta.seed_passthrough) dlogits.array() *= 1.0 - x.array();
  MatrixX dx;
  backward(theta, a, cache, dlogits, nullptr, &dx);
  if (theta.seed_passthrough) dx.col(0).array() += weight.array() * (1.0 - s);
  return dx.col(0);
}

std::size_t surrogate_forward_ops(const SurrogateParams& theta, const SparseOperator& a, Index batch) {
  const auto nnz = static_cast<std::size_t>(a.nonZeros());
  const auto n = static_cast<std::size_t>(a.rows());
  const auto h = static_cast<std::size_t>(theta.hidden());
  const auto b = static_cast<std::size_t>(batch);
  // Â X, the rank-1 hidden expansion, Â H1, and the readout.
  return b * (nnz + n * h + nnz * h + n * h);
}

}  // namespace deeppm
