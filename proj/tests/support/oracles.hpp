#pragma once

// Test-only reference computations. None of these reuse the library's
// traversal, backprop, or selection code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "deeppm/graph.hpp"

namespace deeppm::testing {

struct Arc {
  Node from;
  Node to;
  Scalar p;
};

inline std::vector<Arc> arcs_of(const Graph& g, const EdgeProbabilities& p) {
  std::vector<Arc> arcs;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const auto targets = g.out_neighbors(static_cast<Node>(u));
    for (std::size_t k = 0; k < targets.size(); ++k)
      arcs.push_back({static_cast<Node>(u), targets[k], p[g.arc_begin(static_cast<Node>(u)) + k]});
  }
  return arcs;
}

/// Exact activation probabilities by enumerating all 2^|arcs| live-edge
/// worlds; reachability by fixpoint relaxation over the arc list.
inline VectorX exact_activation(const Graph& g, const EdgeProbabilities& p, const HardMask& seeds) {
  const auto arcs = arcs_of(g, p);
  const std::size_t m = arcs.size();
  const std::size_t n = g.node_count();
  VectorX prob = VectorX::Zero(static_cast<Index>(n));
  for (std::uint64_t world = 0; world < (std::uint64_t{1} << m); ++world) {
    Scalar weight = 1;
    for (std::size_t a = 0; a < m; ++a) weight *= (world >> a & 1) ? arcs[a].p : 1 - arcs[a].p;
    if (weight == 0) continue;
    std::vector<bool> on(n);
    for (std::size_t i = 0; i < n; ++i) on[i] = seeds[i] != 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t a = 0; a < m; ++a) {
        if ((world >> a & 1) && on[static_cast<std::size_t>(arcs[a].from)] && !on[static_cast<std::size_t>(arcs[a].to)]) {
          on[static_cast<std::size_t>(arcs[a].to)] = true;
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (on[i]) prob[static_cast<Index>(i)] += weight;
  }
  return prob;
}

inline Scalar exact_profit(const Graph& g, const EdgeProbabilities& p, const CostBenefit& cb, const HardMask& seeds) {
  const VectorX act = exact_activation(g, p, seeds);
  Scalar cost = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (seeds[i]) cost += cb.cost[static_cast<Index>(i)];
  return cb.benefit.dot(act) - cost;
}

/// Central-difference gradient of a scalar function of a flat parameter vector.
inline VectorX central_difference(const std::function<Scalar(const VectorX&)>& f, const VectorX& at, Scalar step = 1e-5) {
  VectorX grad(at.size());
  VectorX probe = at;
  for (Index i = 0; i < at.size(); ++i) {
    probe[i] = at[i] + step;
    const Scalar up = f(probe);
    probe[i] = at[i] - step;
    const Scalar down = f(probe);
    probe[i] = at[i];
    grad[i] = (up - down) / (2 * step);
  }
  return grad;
}

inline Scalar relative_error(const VectorX& a, const VectorX& b) {
  const Scalar scale = std::max({a.norm(), b.norm(), Scalar(1e-12)});
  return (a - b).norm() / scale;
}

/// Every subset of [0, n) as a mask, in binary-counter order.
inline std::vector<HardMask> all_subsets(std::size_t n) {
  std::vector<HardMask> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    HardMask m(n, 0);
    for (std::size_t i = 0; i < n; ++i) m[i] = (bits >> i) & 1;
    out.push_back(m);
  }
  return out;
}

/// Dense reference for Â = D^{-1/2}(A + I)D^{-1/2} built from an explicit adjacency matrix.
inline MatrixX dense_normalized(std::size_t n, const std::vector<Edge>& edges) {
  MatrixX a = MatrixX::Identity(static_cast<Index>(n), static_cast<Index>(n));
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    a(u, v) = 1;
    a(v, u) = 1;
  }
  const VectorX d = a.rowwise().sum();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) /= std::sqrt(d[i] * d[j]);
  return a;
}

/// Largest |eigenvalue| of a symmetric matrix by power iteration.
inline Scalar spectral_norm(const MatrixX& m, int iterations = 2000) {
  VectorX v = VectorX::Ones(m.rows()) + VectorX::LinSpaced(m.rows(), 0.0, 0.5);
  Scalar lambda = 0;
  for (int k = 0; k < iterations; ++k) {
    const VectorX w = m * v;
    lambda = w.norm() / v.norm();
    if (w.norm() == 0) return 0;
    v = w / w.norm();
  }
  return lambda;
}

}  // namespace deeppm::testing
