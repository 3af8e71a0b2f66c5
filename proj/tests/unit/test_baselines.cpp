#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "deeppm/baselines.hpp"
#include "deeppm/diffusion.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace deeppm;
using namespace deeppm::testing;

namespace {

BaselineConfig small_config(std::uint64_t seed = 1) {
  BaselineConfig cfg;
  cfg.rollouts = 100;
  cfg.rng_seed = seed;
  return cfg;
}

CostBenefit mixed_cost_benefit(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CostBenefit cb{VectorX(static_cast<Index>(n)), VectorX(static_cast<Index>(n))};
  for (Index i = 0; i < cb.cost.size(); ++i) {
    cb.cost[i] = rng.uniform(50, 100);
    cb.benefit[i] = rng.uniform(20, 150);
  }
  return cb;
}

// Greedy on b_i - c_i, the exact answer when nothing diffuses.
HardMask diffusion_free_greedy(const CostBenefit& cb, Scalar budget) {
  const auto n = static_cast<std::size_t>(cb.cost.size());
  HardMask x(n, 0);
  Scalar spent = 0;
  for (;;) {
    int best = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Index>(i);
      if (x[i] || spent + cb.cost[k] > budget || cb.benefit[k] - cb.cost[k] <= 0) continue;
      if (best < 0 || cb.benefit[k] - cb.cost[k] > cb.benefit[best] - cb.cost[best]) best = static_cast<int>(i);
    }
    if (best < 0) return x;
    x[static_cast<std::size_t>(best)] = 1;
    spent += cb.cost[best];
  }
}

}  // namespace

TEST_CASE("simple greedy without diffusion is the exact greedy") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(15, 40, seed);
    const auto p = constant_probabilities(g, 0.0);
    const CostBenefit cb = mixed_cost_benefit(15, 100 + seed);
    for (Scalar budget : {120.0, 300.0, 2000.0}) {
      const HardMask x = simple_greedy(g, p, cb, budget, small_config(seed));
      CHECK(x == diffusion_free_greedy(cb, budget));
    }
  }
}

TEST_CASE("greedy baselines with budget below the cheapest node select nothing") {
  const Graph g = random_graph(10, 20, 1);
  const auto p = constant_probabilities(g, 0.3);
  const CostBenefit cb = mixed_cost_benefit(10, 2);
  const Scalar budget = cb.cost.minCoeff() - 1;
  CHECK(mask_count(simple_greedy(g, p, cb, budget, small_config())) == 0);
  CHECK(mask_count(stochastic_greedy(g, p, cb, budget, small_config())) == 0);
  CHECK(mask_count(double_greedy(g, p, cb, budget, small_config())) == 0);
  CHECK(mask_count(random_selection(g, cb, budget, 3)) == 0);
  CHECK(mask_count(high_degree(g, cb, budget)) == 0);
}

TEST_CASE("simple greedy picks the source of a deterministic path first") {
  const Graph g = path_graph(3);
  const auto p = constant_probabilities(g, 1.0);
  const CostBenefit cb = flat_cost_benefit(3, 50, 100);
  // Singleton profits by enumeration: A = 250, B = 150, C = 50.
  CHECK(exact_profit(g, p, cb, {1, 0, 0}) == 250.0);
  CHECK(simple_greedy(g, p, cb, 60, small_config()) == HardMask{1, 0, 0});
  // Once A is seeded every other node only adds cost.
  CHECK(simple_greedy(g, p, cb, 1000, small_config()) == HardMask{1, 0, 0});
}

TEST_CASE("stochastic greedy") {
  const Graph g = random_graph(30, 90, 4);
  const auto p = assign_probabilities(g, ProbabilityModel::uniform(0.1), 1);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, {80, 150}, 5);
  BaselineConfig full = small_config(7);
  full.sample_fraction = 1.0;
  for (Scalar budget : {100.0, 400.0, 900.0})
    CHECK(stochastic_greedy(g, p, cb, budget, full) == simple_greedy(g, p, cb, budget, full));

  BaselineConfig sampled = small_config(7);
  sampled.sample_fraction = 0.2;
  const HardMask x = stochastic_greedy(g, p, cb, 500, sampled);
  CHECK(mask_cost(x, cb.cost) <= 500);
  CHECK(stochastic_greedy(g, p, cb, 500, sampled) == x);

  BaselineConfig bad = small_config();
  bad.sample_fraction = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = small_config();
  bad.rollouts = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("double greedy") {
  SUBCASE("without diffusion a node is kept iff its profit is non-negative") {
    const Graph g = random_graph(20, 50, 8);
    const auto p = constant_probabilities(g, 0.0);
    const CostBenefit cb = mixed_cost_benefit(20, 9);
    const HardMask x = double_greedy(g, p, cb, 1e9, small_config());
    for (std::size_t i = 0; i < 20; ++i) {
      const auto k = static_cast<Index>(i);
      CHECK(x[i] == (cb.benefit[k] - cb.cost[k] >= 0));
    }
  }
  SUBCASE("repair keeps the budget and results are reproducible") {
    const Graph g = random_graph(25, 80, 10);
    const auto p = assign_probabilities(g, ProbabilityModel::trivalency(), 2);
    const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 3);
    for (Scalar budget : {60.0, 300.0, 700.0}) {
      const HardMask x = double_greedy(g, p, cb, budget, small_config(4));
      CHECK(mask_cost(x, cb.cost) <= budget);
      CHECK(double_greedy(g, p, cb, budget, small_config(4)) == x);
    }
  }
}

TEST_CASE("degree discount formula") {
  CHECK(degree_discount_score(5, 1, 0.1) == 2.6);
  for (Scalar d : {0.0, 1.0, 7.0, 42.0})
    for (Scalar p : {0.0, 0.01, 0.1, 1.0}) CHECK(degree_discount_score(d, 0, p) == d);
  CHECK(degree_discount_score(10, 3, 0.0) == 4.0);
  CHECK(degree_discount_score(4, 2, 0.5) == doctest::Approx(4 - 4 - 2 * 2 * 0.5));
  static_assert(degree_discount_score(5, 0, 0.3) == 5);
}

TEST_CASE("degree heuristics") {
  const Graph star = star_graph(6);
  const CostBenefit cb = flat_cost_benefit(7, 10, 100);
  CHECK(high_degree(star, cb, 10) == HardMask{1, 0, 0, 0, 0, 0, 0});
  CHECK(single_discount(star, cb, 10) == HardMask{1, 0, 0, 0, 0, 0, 0});
  CHECK(degree_discount(star, cb, 10, 0.1) == HardMask{1, 0, 0, 0, 0, 0, 0});

  // Hub unaffordable: skip it and keep going.
  CostBenefit pricey = cb;
  pricey.cost[0] = 1000;
  CHECK(high_degree(star, pricey, 25) == HardMask{0, 1, 1, 0, 0, 0, 0});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(20, 50, seed, false);
    const CostBenefit flat = flat_cost_benefit(20, 10, 100);
    CHECK(degree_discount(g, flat, 10, 0.0) == single_discount(g, flat, 10));
    CHECK(degree_discount(g, flat, 10, 0.3) == high_degree(g, flat, 10));
  }
}

TEST_CASE("clustering coefficients and high clustering") {
  const VectorX tri = clustering_coefficients(triangle_graph());
  CHECK((tri.array() == 1.0).all());

  const Graph star = star_graph(4);
  CHECK((clustering_coefficients(star).array() == 0.0).all());
  CHECK(high_clustering(star, flat_cost_benefit(5, 10, 100), 10) == HardMask{1, 0, 0, 0, 0});

  // Triangle 0-1-2 with a pendant 3 on node 2: c = (1, 1, 1/3, 0).
  const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {2, 3}}, false);
  const VectorX c = clustering_coefficients(g);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 1.0);
  CHECK(c[2] == doctest::Approx(1.0 / 3.0));
  CHECK(c[3] == 0.0);
  CHECK(high_clustering(g, flat_cost_benefit(4, 10, 100), 25) == HardMask{1, 1, 0, 0});
}

TEST_CASE("random selection") {
  const Graph g = random_graph(5, 8, 1);
  const CostBenefit cb = flat_cost_benefit(5, 10, 100);
  CHECK(random_selection(g, cb, 20, 42) == random_selection(g, cb, 20, 42));

  std::vector<int> counts(5, 0);
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    const HardMask x = random_selection(g, cb, 20, static_cast<std::uint64_t>(s));
    CHECK(mask_count(x) == 2);
    for (std::size_t i = 0; i < 5; ++i) counts[i] += x[i];
  }
  const double mean = trials * 0.4, sigma = std::sqrt(trials * 0.4 * 0.6);
  for (int c : counts) CHECK(std::abs(c - mean) <= 5 * sigma);
}

TEST_CASE("every baseline is budget feasible") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = random_graph(25, 70, 200 + seed, seed % 2 == 0);
    const auto p = assign_probabilities(g, ProbabilityModel::trivalency(), seed);
    const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, seed);
    Rng rng(seed);
    const Scalar budget = rng.uniform(10, 800);
    const BaselineConfig cfg = small_config(seed);
    for (const HardMask& x : {simple_greedy(g, p, cb, budget, cfg), stochastic_greedy(g, p, cb, budget, cfg),
                              double_greedy(g, p, cb, budget, cfg), high_degree(g, cb, budget),
                              single_discount(g, cb, budget), degree_discount(g, cb, budget, p.mean()),
                              high_clustering(g, cb, budget), random_selection(g, cb, budget, seed)})
      CHECK(mask_cost(x, cb.cost) <= budget);
  }
}

TEST_CASE("randomized baselines ignore the worker count") {
  const Graph g = random_graph(25, 80, 3);
  const auto p = assign_probabilities(g, ProbabilityModel::uniform(0.1), 1);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 3);
  BaselineConfig one = small_config(5), many = small_config(5);
  one.workers = 1;
  many.workers = 4;
  CHECK(simple_greedy(g, p, cb, 400, one) == simple_greedy(g, p, cb, 400, many));
  CHECK(stochastic_greedy(g, p, cb, 400, one) == stochastic_greedy(g, p, cb, 400, many));
  CHECK(double_greedy(g, p, cb, 400, one) == double_greedy(g, p, cb, 400, many));
}
