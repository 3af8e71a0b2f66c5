#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "deeppm/baselines.hpp"
#include "deeppm/graph.hpp"
#include "deeppm/inference.hpp"
#include "deeppm/trainer.hpp"

namespace deeppm {

enum class Method {
  kDeepPM,
  kSimpleGreedy,
  kStochasticGreedy,
  kDoubleGreedy,
  kSingleDiscount,
  kDegreeDiscount,
  kHighDegree,
  kHighClustering,
  kRandom,
};

inline constexpr Method kAllMethods[] = {Method::kDeepPM,         Method::kSimpleGreedy,   Method::kStochasticGreedy,
                                         Method::kDoubleGreedy,   Method::kSingleDiscount, Method::kDegreeDiscount,
                                         Method::kHighDegree,     Method::kHighClustering, Method::kRandom};

/// Short names used on the command line and in CSV output: DeepPM SG StG DG SD DD HD HC Random.
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

std::string_view prob_model_name(const ProbabilityModel& model);

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::string dataset_name;
  bool directed = true;
  ProbabilityModel prob_model = ProbabilityModel::uniform(0.1);
  Interval cost_range = kDefaultCostRange;
  Interval benefit_range = kDefaultBenefitRange;
  std::vector<Scalar> budgets;
  std::vector<Method> methods;
  std::size_t eval_rollouts = 10000;
  TrainConfig train;
  InferenceConfig inference;
  BaselineConfig baseline;
  std::filesystem::path out_dir = "results";
  std::uint64_t seed = 0;
  std::size_t workers = 0;

  void validate() const;
};

/// Parses flat "key = value" text ('#' starts a comment). Relative dataset
/// paths resolve against `base_dir`. Unknown keys are rejected.
///
/// Keys: dataset dataset_name directed prob_model p_c cost_min cost_max
/// benefit_min benefit_max budgets methods eval_rollouts seed out_dir workers
/// train.{masks,labels_per_mask,epochs,batch_size,lambda_diff,lambda_ae,
/// hidden,bias,seed_passthrough,ae_hidden,latent_dim,learning_rate}
/// infer.{mu,ascent_steps,step_size,restarts,max_halvings,candidate_cap}
/// baseline.{rollouts,sample_fraction}
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical one-key-per-line rendering (seed excluded); its hash is the checkpoint fingerprint.
std::string canonical_config(const ExperimentConfig& cfg);
std::string config_fingerprint(const ExperimentConfig& cfg);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

}  // namespace deeppm
