// deeppm: budget-constrained profit maximization from the command line.
//
//   deeppm stats    --dataset PATH [--undirected] | --config PATH
//   deeppm train    --config PATH [--budget B] [--out DIR] [--seed N]
//   deeppm select   --config PATH --checkpoint FILE [--budget B] [--out DIR] [--seed N]
//   deeppm run      --config PATH [--out DIR] [--seed N]
//   deeppm plotdata --csv FILE [--out DIR]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "deeppm/experiment.hpp"

namespace {

deeppm::ExperimentConfig resolve(const std::string& config_path, const std::string& out_dir,
                                 const std::optional<std::uint64_t>& seed) {
  auto cfg = deeppm::load_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained seed selection for profit maximization under Independent Cascade"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget;

  auto* stats = app.add_subcommand("stats", "Print node/edge/degree statistics of an edge list");
  std::string dataset;
  bool undirected = false;
  stats->add_option("--dataset", dataset, "SNAP edge list");
  stats->add_flag("--undirected", undirected, "Treat the edge list as undirected");
  stats->add_option("--config", config_path, "Take dataset and directedness from a config file");

  auto* train = app.add_subcommand("train", "Label masks with the teacher and train the student");
  train->add_option("--config", config_path, "Experiment config")->required();
  train->add_option("--budget", budget, "Budget to train for (default: first configured budget)");
  train->add_option("--out", out_dir, "Output directory");
  train->add_option("--seed", seed, "Override the master seed");

  auto* select = app.add_subcommand("select", "Select seeds with a trained checkpoint");
  std::string checkpoint;
  select->add_option("--config", config_path, "Experiment config")->required();
  select->add_option("--checkpoint", checkpoint, "Checkpoint written by 'train'")->required();
  select->add_option("--budget", budget, "Budget (default: the checkpoint's)");
  select->add_option("--out", out_dir, "Output directory");
  select->add_option("--seed", seed, "Override the master seed");

  auto* run = app.add_subcommand("run", "Run every configured method for every budget");
  run->add_option("--config", config_path, "Experiment config")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the master seed");

  auto* plot = app.add_subcommand("plotdata", "Split a records CSV into per-figure data files");
  std::string csv;
  plot->add_option("--csv", csv, "records.csv written by 'run'")->required();
  plot->add_option("--out", out_dir, "Output directory (default: next to the CSV)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats->parsed()) {
      if (!config_path.empty()) {
        const auto cfg = deeppm::load_config(config_path);
        deeppm::cmd_stats(cfg.dataset, cfg.directed, std::cout);
      } else if (!dataset.empty()) {
        deeppm::cmd_stats(dataset, !undirected, std::cout);
      } else {
        std::cerr << "stats: pass --dataset or --config\n";
        return 2;
      }
    } else if (train->parsed()) {
      const auto cfg = resolve(config_path, out_dir, seed);
      const double b = budget.value_or(cfg.budgets.front());
      const auto result = deeppm::cmd_train(cfg, b, cfg.out_dir);
      const auto& last = result.history.back();
      std::cout << "trained for budget " << b << ": L_diff=" << last.diffusion << " L_AE=" << last.reconstruction
                << "\ncheckpoint: " << (cfg.out_dir / "checkpoint.txt").string() << '\n';
    } else if (select->parsed()) {
      const auto cfg = resolve(config_path, out_dir, seed);
      const auto sel = deeppm::cmd_select(cfg, checkpoint, budget, cfg.out_dir);
      const auto& d = sel.diagnostics;
      std::cout << "seeds=" << d.seed_count << " cost=" << d.cost_used << " surrogate_profit=" << d.surrogate_profit
                << " soft_objective=" << d.soft_objective << "\nseed set: " << (cfg.out_dir / "seeds.txt").string()
                << '\n';
    } else if (run->parsed()) {
      const auto cfg = resolve(config_path, out_dir, seed);
      const auto records = deeppm::cmd_run(cfg);
      std::cout << records.size() << " records written to " << (cfg.out_dir / "records.csv").string() << '\n';
    } else if (plot->parsed()) {
      const std::filesystem::path dir =
          out_dir.empty() ? std::filesystem::path(csv).parent_path() / "plotdata" : std::filesystem::path(out_dir);
      for (const auto& path : deeppm::cmd_plotdata(csv, dir)) std::cout << path.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
