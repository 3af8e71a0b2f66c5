#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "deeppm/graph.hpp"
#include "deeppm/numerics.hpp"
#include "support/fixtures.hpp"

using namespace deeppm;
using namespace deeppm::testing;

TEST_CASE("spmv") {
  SUBCASE("single node is the identity") {
    const SparseOperator a = normalized_operator(Graph::from_edges(1, {}, true));
    MatrixX h(1, 3);
    h << 1.5, -2.0, 7.0;
    CHECK(spmv(a, h) == h);
  }
  SUBCASE("two-node hand case") {
    const SparseOperator a = normalized_operator(path_graph(2));
    const MatrixX out = spmv(a, VectorX::Unit(2, 0));
    CHECK(out(0, 0) == 0.5);
    CHECK(out(1, 0) == 0.5);
  }
  SUBCASE("linearity and shape checks") {
    const SparseOperator a = normalized_operator(random_graph(10, 25, 3));
    CHECK(spmv(a, MatrixX::Zero(10, 4)) == MatrixX::Zero(10, 4));
    const MatrixX h = MatrixX::Random(10, 4);
    CHECK((spmv(a, h) - MatrixX(a) * h).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(spmv(a, MatrixX::Zero(9, 4)), ShapeError);
  }
}

TEST_CASE("binary cross-entropy") {
  const VectorX half = VectorX::Constant(4, 0.5);
  VectorX target(4);
  target << 1, 0, 0, 1;
  CHECK(bce(half, target) == doctest::Approx(std::log(2.0)));

  VectorX pred(2), y(2);
  pred << 0.9, 0.1;
  y << 1, 0;
  CHECK(bce(pred, y) == doctest::Approx(-(std::log(0.9) + std::log(0.9)) / 2));

  VectorX edge(2), edge_target(2);
  edge << 0.0, 1.0;
  edge_target << 1.0, 0.0;
  const Scalar clamped = bce(edge, edge_target);
  CHECK(std::isfinite(clamped));
  CHECK(clamped == doctest::Approx(-std::log(kProbClamp)));
  CHECK(std::isfinite(bce(edge, edge)));

  CHECK_THROWS_AS(bce(VectorX::Constant(3, 0.5), VectorX::Zero(2)), ShapeError);
}

TEST_CASE("binary cross-entropy is minimised at the target") {
  for (Scalar t : {0.0, 0.1, 0.37, 0.5, 0.8, 1.0}) {
    Scalar best_p = -1, best = std::numeric_limits<Scalar>::infinity();
    for (int k = 1; k < 1000; ++k) {
      const Scalar q = k / 1000.0;
      const Scalar v = bce(VectorX::Constant(1, q), VectorX::Constant(1, t));
      if (v < best) {
        best = v;
        best_p = q;
      }
    }
    CHECK(std::abs(best_p - std::clamp(t, 0.001, 0.999)) <= 1e-3 + 1e-12);
  }
}

TEST_CASE("adam") {
  const AdamConfig cfg;
  SUBCASE("zero gradient is a fixed point") {
    VectorX param = VectorX::LinSpaced(5, -1, 1);
    const VectorX start = param;
    AdamState<Scalar> state;
    for (int i = 0; i < 10; ++i) adam_step(param, VectorX::Zero(5), state, cfg);
    CHECK(param == start);
    CHECK(state.step == 10);
    CHECK((state.v.array() >= 0).all());
  }
  SUBCASE("first step has magnitude lr * sign(g)") {
    for (Scalar g : {3.0, -0.02, 1e3}) {
      VectorX param = VectorX::Constant(1, 2.0);
      AdamState<Scalar> state;
      adam_step(param, VectorX::Constant(1, g), state, cfg);
      const Scalar expected = cfg.learning_rate * g / (std::abs(g) + cfg.epsilon);
      CHECK(2.0 - param[0] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(2.0 - param[0]) == doctest::Approx(cfg.learning_rate).epsilon(1e-5));
    }
  }
  SUBCASE("identical inputs give identical results") {
    MatrixX a = MatrixX::Constant(2, 3, 0.3), b = a;
    AdamState<Scalar> sa, sb;
    const MatrixX g = MatrixX::Random(2, 3);
    for (int i = 0; i < 5; ++i) {
      adam_step(a, g, sa, cfg);
      adam_step(b, g, sb, cfg);
    }
    CHECK(a == b);
  }
  SUBCASE("shape mismatch") {
    VectorX param = VectorX::Zero(3);
    AdamState<Scalar> state;
    CHECK_THROWS_AS(adam_step(param, VectorX::Zero(2), state, cfg), ShapeError);
  }
}

TEST_CASE("elementwise nonlinearities") {
  VectorX v(3);
  v << -1, 0, 2;
  const VectorX r = relu(v);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 2.0);

  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-3.7) == doctest::Approx(1.0 - sigmoid(3.7)).epsilon(1e-15));
  const VectorX extreme = sigmoid(VectorX::LinSpaced(3, -1000, 1000));
  CHECK(extreme.minCoeff() > 0.0);
  CHECK(extreme.maxCoeff() < 1.0);
}
