#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace deeppm {

using Scalar = double;
using Index = Eigen::Index;
using Node = std::int32_t;

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

/// Compressed-row sparse matrix; the propagation operator lives in this layout.
template <typename T>
using SparseRowMatrix = Eigen::SparseMatrix<T, Eigen::RowMajor, Index>;

using VectorX = Vector<Scalar>;
using MatrixX = Matrix<Scalar>;
using SparseOperator = SparseRowMatrix<Scalar>;

/// Hard 0/1 node mask. Used both for seed sets and for final activation outcomes.
using HardMask = std::vector<std::uint8_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline void require_shape(bool condition, const std::string& message) {
  if (!condition) throw ShapeError(message);
}

inline VectorX to_soft(const HardMask& mask) {
  VectorX out(static_cast<Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) out[static_cast<Index>(i)] = mask[i] ? 1.0 : 0.0;
  return out;
}

inline std::size_t mask_count(const HardMask& mask) {
  std::size_t n = 0;
  for (auto v : mask) n += v ? 1 : 0;
  return n;
}

/// c^T x for a hard mask, summed in index order.
inline Scalar mask_cost(const HardMask& mask, const VectorX& cost) {
  Scalar total = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) total += cost[static_cast<Index>(i)];
  return total;
}

inline HardMask mask_from_nodes(std::size_t node_count, const std::vector<Node>& nodes) {
  HardMask mask(node_count, 0);
  for (Node v : nodes) mask.at(static_cast<std::size_t>(v)) = 1;
  return mask;
}

inline std::vector<Node> nodes_of(const HardMask& mask) {
  std::vector<Node> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<Node>(i));
  return out;
}

}  // namespace deeppm
