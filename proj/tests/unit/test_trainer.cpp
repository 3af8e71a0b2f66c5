#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "deeppm/diffusion.hpp"
#include "deeppm/trainer.hpp"
#include "support/fixtures.hpp"
#include "support/flatten.hpp"

using namespace deeppm;
using namespace deeppm::testing;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.masks = 30;
  cfg.labels_per_mask = 2;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.surrogate_hidden = 4;
  cfg.ae_hidden = 8;
  cfg.latent_dim = 3;
  cfg.rng_seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("generated samples are feasible and keep their seeds") {
  const Graph g = random_graph(40, 120, 1);
  const auto p = assign_probabilities(g, ProbabilityModel::uniform(0.2), 1);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 2);
  TrainConfig cfg = small_config();
  cfg.masks = 200;
  for (Scalar budget : {60.0, 250.0, 1000.0}) {
    const auto samples = generate_training_set(g, p, cb, budget, cfg, 11);
    CHECK(samples.size() == cfg.masks * cfg.labels_per_mask);
    for (const auto& s : samples) {
      CHECK(mask_cost(s.x, cb.cost) <= budget);
      CHECK(mask_count(s.x) >= 1);
      for (std::size_t i = 0; i < s.x.size(); ++i) CHECK(s.y[i] >= s.x[i]);
    }
  }
}

TEST_CASE("infeasible budgets are rejected") {
  const Graph g = random_graph(10, 20, 1);
  const auto p = constant_probabilities(g, 0.1);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 2);
  CHECK_THROWS_AS(generate_training_set(g, p, cb, 0.0, small_config(), 1), ValidationError);
  CHECK_THROWS_AS(generate_training_set(g, p, cb, 49.0, small_config(), 1), ValidationError);
}

TEST_CASE("zero probabilities give y = x") {
  const Graph g = random_graph(15, 40, 3);
  const auto p = constant_probabilities(g, 0.0);
  const CostBenefit cb = flat_cost_benefit(15, 10, 100);
  for (const auto& s : generate_training_set(g, p, cb, 50, small_config(), 4)) CHECK(s.y == s.x);
}

TEST_CASE("sample generation is deterministic and independent of the worker count") {
  const Graph g = random_graph(30, 90, 5);
  const auto p = assign_probabilities(g, ProbabilityModel::uniform(0.3), 1);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 2);
  TrainConfig cfg = small_config();
  cfg.workers = 1;
  const auto a = generate_training_set(g, p, cb, 300, cfg, 9);
  cfg.workers = 3;
  const auto b = generate_training_set(g, p, cb, 300, cfg, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("training configuration validation") {
  const SparseOperator a = normalized_operator(path_graph(3));
  CHECK_THROWS_AS(train({}, a, small_config()), Error);
  TrainConfig cfg = small_config();
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = small_config();
  cfg.lambda_ae = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("loss terms decouple") {
  const Graph g = random_graph(12, 30, 6);
  const auto p = constant_probabilities(g, 0.3);
  const CostBenefit cb = flat_cost_benefit(12, 10, 100);
  const SparseOperator a = normalized_operator(g);
  const TrainConfig cfg = small_config();
  const auto samples = generate_training_set(g, p, cb, 40, cfg, 2);

  TrainConfig no_ae = cfg;
  no_ae.lambda_ae = 0;
  const TrainResult joint = train(samples, a, cfg);
  const TrainResult surrogate_only = train(samples, a, no_ae);
  CHECK(flatten(surrogate_only.phi) == flatten(initial_autoencoder(12, cfg)));
  CHECK(flatten(surrogate_only.theta) == flatten(joint.theta));
  CHECK(flatten(joint.phi) != flatten(initial_autoencoder(12, cfg)));
}

TEST_CASE("training is deterministic and reduces the corpus loss") {
  const Graph g = random_graph(20, 60, 7);
  const auto p = constant_probabilities(g, 0.2);
  const CostBenefit cb = assign_cost_benefit(g, kDefaultCostRange, kDefaultBenefitRange, 3);
  const SparseOperator a = normalized_operator(g);
  const TrainConfig cfg = small_config();
  const auto samples = generate_training_set(g, p, cb, 300, cfg, 3);

  const TrainResult first = train(samples, a, cfg);
  const TrainResult second = train(samples, a, cfg);
  CHECK(flatten(first.theta) == flatten(second.theta));
  CHECK(flatten(first.phi) == flatten(second.phi));
  REQUIRE(first.history.size() == cfg.epochs + 1);
  CHECK(first.history.back().total < first.history.front().total);
  const EpochLoss last = corpus_loss(first.theta, first.phi, a, samples, cfg);
  CHECK(last.total == doctest::Approx(first.history.back().total));
  CHECK(last.total == doctest::Approx(cfg.lambda_diff * last.diffusion + cfg.lambda_ae * last.reconstruction));
}

TEST_CASE("deterministic teacher on ten nodes is learned") {
  // Five undirected pairs: with p = 1 each node's label is the OR of its pair.
  std::vector<Edge> pairs;
  for (Node u = 0; u < 10; u += 2) pairs.emplace_back(u, u + 1);
  const Graph g = Graph::from_edges(10, pairs, false);
  const auto p = constant_probabilities(g, 1.0);
  const CostBenefit cb = flat_cost_benefit(10, 10, 100);
  const SparseOperator a = normalized_operator(g);
  TrainConfig cfg = small_config();
  cfg.masks = 60;
  cfg.labels_per_mask = 1;
  cfg.epochs = 500;
  cfg.surrogate_hidden = 8;
  cfg.lambda_ae = 0;
  const auto samples = generate_training_set(g, p, cb, 40, cfg, 1);
  const TrainResult r = train(samples, a, cfg);
  MESSAGE("final L_diff " << r.history.back().diffusion);
  CHECK(r.history.back().diffusion < 0.05);
}
