#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>

#include "deeppm/types.hpp"

namespace deeppm {

inline constexpr Scalar kProbClamp = 1e-7;

/// Sparse-dense product Â H. Rows of H are nodes, columns are features.
template <typename SparseScalar, typename Derived>
Matrix<typename Derived::Scalar> spmv(const SparseRowMatrix<SparseScalar>& a, const Eigen::MatrixBase<Derived>& h) {
  require_shape(a.cols() == h.rows(), "spmv: operator columns must equal input rows");
  return a * h;
}

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseMax(typename Derived::Scalar(0));
}

template <std::floating_point T>
T sigmoid(T t) {
  const T s = t >= 0 ? T(1) / (T(1) + std::exp(-t)) : std::exp(t) / (T(1) + std::exp(t));
  return std::clamp(s, T(kProbClamp), T(1 - kProbClamp));
}

/// Elementwise logistic, clamped into [1e-7, 1 - 1e-7].
template <typename Derived>
Matrix<typename Derived::Scalar> sigmoid(const Eigen::MatrixBase<Derived>& v) {
  using T = typename Derived::Scalar;
  return v.unaryExpr([](T t) { return sigmoid(t); });
}

/// Mean binary cross-entropy over all entries; predictions clamped to
/// [1e-7, 1 - 1e-7]. Summation runs in storage order.
template <typename DerivedP, typename DerivedY>
typename DerivedP::Scalar bce(const Eigen::MatrixBase<DerivedP>& pred, const Eigen::MatrixBase<DerivedY>& target) {
  using T = typename DerivedP::Scalar;
  require_shape(pred.rows() == target.rows() && pred.cols() == target.cols(), "bce: prediction/target shape mismatch");
  require_shape(pred.size() > 0, "bce: empty input");
  T total = 0;
  for (Index j = 0; j < pred.cols(); ++j) {
    for (Index i = 0; i < pred.rows(); ++i) {
      const T p = std::clamp(pred(i, j), T(kProbClamp), T(1 - kProbClamp));
      const T y = target(i, j);
      total += -y * std::log(p) - (T(1) - y) * std::log(T(1) - p);
    }
  }
  return total / static_cast<T>(pred.size());
}

struct AdamConfig {
  Scalar learning_rate = 1e-2;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar epsilon = 1e-8;
};

/// Moment accumulators for one parameter block.
template <typename T>
struct AdamState {
  Matrix<T> m;
  Matrix<T> v;
  long step = 0;

  AdamState() = default;
  AdamState(Index rows, Index cols) : m(Matrix<T>::Zero(rows, cols)), v(Matrix<T>::Zero(rows, cols)) {}
};

/// One bias-corrected Adam update of `param` in place.
template <typename DerivedParam, typename DerivedGrad, typename T>
void adam_step(Eigen::MatrixBase<DerivedParam>& param, const Eigen::MatrixBase<DerivedGrad>& grad, AdamState<T>& state,
               const AdamConfig& cfg) {
  require_shape(param.rows() == grad.rows() && param.cols() == grad.cols(), "adam: parameter/gradient shape mismatch");
  if (state.m.size() == 0) state = AdamState<T>(param.rows(), param.cols());
  require_shape(state.m.rows() == param.rows() && state.m.cols() == param.cols(), "adam: state shape mismatch");

  ++state.step;
  state.m = cfg.beta1 * state.m + (1 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1 - cfg.beta2) * grad.cwiseAbs2();
  const T correction1 = 1 - std::pow(cfg.beta1, static_cast<T>(state.step));
  const T correction2 = 1 - std::pow(cfg.beta2, static_cast<T>(state.step));
  const T lr = cfg.learning_rate;
  const T eps = cfg.epsilon;
  param -= (lr * (state.m / correction1).array() / ((state.v / correction2).array().sqrt() + eps)).matrix();
}

}  // namespace deeppm
