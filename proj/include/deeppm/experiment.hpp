#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deeppm/checkpoint.hpp"
#include "deeppm/config.hpp"
#include "deeppm/inference.hpp"
#include "deeppm/trainer.hpp"

namespace deeppm {

struct ExperimentRecord {
  std::string dataset;
  std::string prob_model;
  Scalar budget = 0;
  std::string method;
  Scalar profit = 0;
  std::size_t seed_size = 0;
  double time_sec = 0;
  std::uint64_t rng_seed = 0;
};

inline constexpr std::string_view kRecordsHeader = "dataset,prob_model,budget,method,profit,seed_size,time_sec,rng_seed";

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records);

/// Graph plus the seeded edge probabilities and node costs/benefits of one experiment.
struct ExperimentSetup {
  Graph graph;
  EdgeProbabilities probabilities;
  CostBenefit cost_benefit;
};

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg);

/// Seeds of one budget cell, derived from the master seed and the budget value.
struct CellSeeds {
  std::uint64_t evaluation = 0;
  std::uint64_t training_data = 0;
  std::uint64_t training = 0;
  std::uint64_t inference = 0;
  std::uint64_t baseline = 0;
  std::uint64_t random = 0;
};

CellSeeds cell_seeds(std::uint64_t master_seed, Scalar budget);

struct DeepPMRun {
  Checkpoint checkpoint;
  std::vector<EpochLoss> history;
};

/// Teacher labelling and joint training for one budget.
DeepPMRun train_deeppm(const ExperimentSetup& setup, const ExperimentConfig& cfg, Scalar budget);

struct MethodOutcome {
  HardMask mask;
  std::optional<SelectionDiagnostics> diagnostics;
};

/// Runs one selection method for one budget. DeepPM trains from scratch.
MethodOutcome run_method(Method method, const ExperimentSetup& setup, const ExperimentConfig& cfg, Scalar budget);

/// Prints nodes, edges, max degree and average degree.
GraphStats cmd_stats(const std::filesystem::path& dataset, bool directed, std::ostream& out);

/// Every (budget, method) cell: select, time the selection, evaluate with the
/// teacher using the cell's shared evaluation seed. Writes records.csv,
/// deeppm_diagnostics.csv (when DeepPM runs) and budget_bounds.csv to cfg.out_dir.
std::vector<ExperimentRecord> cmd_run(const ExperimentConfig& cfg);

/// Trains for `budget` and writes checkpoint.txt and train_loss.csv into out_dir.
DeepPMRun cmd_train(const ExperimentConfig& cfg, Scalar budget, const std::filesystem::path& out_dir);

/// Runs inference from a checkpoint and writes seeds.txt into out_dir. The
/// budget defaults to the one the checkpoint was trained for.
Selection cmd_select(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint_path,
                     std::optional<Scalar> budget, const std::filesystem::path& out_dir);

/// Splits a records CSV into one tidy file per (dataset, prob_model, metric)
/// with columns budget,method,value; values are copied verbatim. Returns the files written.
std::vector<std::filesystem::path> cmd_plotdata(const std::filesystem::path& records_csv,
                                                const std::filesystem::path& out_dir);

/// One original node ID per line.
void write_seed_set(std::ostream& out, const Graph& g, const HardMask& mask);
HardMask read_seed_set(std::istream& in, const Graph& g);

}  // namespace deeppm
