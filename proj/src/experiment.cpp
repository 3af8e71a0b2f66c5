#include "deeppm/experiment.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "deeppm/baselines.hpp"
#include "deeppm/diffusion.hpp"
#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

enum Stream : std::uint64_t {
  kProbabilities = 1,
  kCostBenefit = 2,
  kEvaluation = 3,
  kTrainingData = 4,
  kTraining = 5,
  kInference = 6,
  kBaseline = 7,
  kRandom = 8,
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

ExperimentConfig with_cell_seeds(const ExperimentConfig& cfg, const CellSeeds& seeds) {
  ExperimentConfig out = cfg;
  out.train.rng_seed = seeds.training;
  out.train.workers = cfg.workers;
  out.inference.rng_seed = seeds.inference;
  out.inference.workers = cfg.workers;
  out.baseline.rng_seed = seeds.baseline;
  out.baseline.workers = cfg.workers;
  return out;
}

}  // namespace

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.dataset << ',' << r.prob_model << ',' << format_number(r.budget) << ',' << r.method << ','
        << format_number(r.profit) << ',' << r.seed_size << ',' << format_number(r.time_sec) << ',' << r.rng_seed
        << '\n';
  }
}

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg) {
  ExperimentSetup setup;
  setup.graph = load_edge_list(cfg.dataset, cfg.directed);
  setup.probabilities = assign_probabilities(setup.graph, cfg.prob_model, derive_seed(cfg.seed, kProbabilities));
  setup.cost_benefit =
      assign_cost_benefit(setup.graph, cfg.cost_range, cfg.benefit_range, derive_seed(cfg.seed, kCostBenefit));
  return setup;
}

CellSeeds cell_seeds(std::uint64_t master_seed, Scalar budget) {
  const auto key = std::bit_cast<std::uint64_t>(budget);
  return CellSeeds{derive_seed(master_seed, kEvaluation, key),  derive_seed(master_seed, kTrainingData, key),
                   derive_seed(master_seed, kTraining, key),    derive_seed(master_seed, kInference, key),
                   derive_seed(master_seed, kBaseline, key),    derive_seed(master_seed, kRandom, key)};
}

DeepPMRun train_deeppm(const ExperimentSetup& setup, const ExperimentConfig& cfg, Scalar budget) {
  const CellSeeds seeds = cell_seeds(cfg.seed, budget);
  const ExperimentConfig cell = with_cell_seeds(cfg, seeds);
  const auto samples = generate_training_set(setup.graph, setup.probabilities, setup.cost_benefit, budget, cell.train,
                                             seeds.training_data);
  const SparseOperator a = normalized_operator(setup.graph);
  TrainResult trained = train(samples, a, cell.train);

  DeepPMRun run;
  run.checkpoint.theta = std::move(trained.theta);
  run.checkpoint.phi = std::move(trained.phi);
  run.checkpoint.node_count = setup.graph.node_count();
  run.checkpoint.budget = budget;
  run.checkpoint.rng_seed = cfg.seed;
  run.checkpoint.config_fingerprint = config_fingerprint(cfg);
  run.history = std::move(trained.history);
  return run;
}

MethodOutcome run_method(Method method, const ExperimentSetup& setup, const ExperimentConfig& cfg, Scalar budget) {
  const CellSeeds seeds = cell_seeds(cfg.seed, budget);
  const ExperimentConfig cell = with_cell_seeds(cfg, seeds);
  const Graph& g = setup.graph;
  const CostBenefit& cb = setup.cost_benefit;
  MethodOutcome out;
  switch (method) {
    case Method::kDeepPM: {
      // Nothing is affordable: no training set exists and the empty set is the only answer.
      if (budget < cb.cost.minCoeff()) {
        out.mask.assign(g.node_count(), 0);
        out.diagnostics = SelectionDiagnostics{};
        break;
      }
      const DeepPMRun run = train_deeppm(setup, cfg, budget);
      Selection sel = select_seeds(g, cb, budget, run.checkpoint, cell.inference);
      out.mask = std::move(sel.mask);
      out.diagnostics = sel.diagnostics;
      break;
    }
    case Method::kSimpleGreedy:
      out.mask = simple_greedy(g, setup.probabilities, cb, budget, cell.baseline);
      break;
    case Method::kStochasticGreedy:
      out.mask = stochastic_greedy(g, setup.probabilities, cb, budget, cell.baseline);
      break;
    case Method::kDoubleGreedy:
      out.mask = double_greedy(g, setup.probabilities, cb, budget, cell.baseline);
      break;
    case Method::kSingleDiscount:
      out.mask = single_discount(g, cb, budget);
      break;
    case Method::kDegreeDiscount: {
      const Scalar p = cfg.prob_model.kind == ProbabilityModel::Kind::kUniform ? cfg.prob_model.p_c
                                                                                : setup.probabilities.mean();
      out.mask = degree_discount(g, cb, budget, p);
      break;
    }
    case Method::kHighDegree:
      out.mask = high_degree(g, cb, budget);
      break;
    case Method::kHighClustering:
      out.mask = high_clustering(g, cb, budget);
      break;
    case Method::kRandom:
      out.mask = random_selection(g, cb, budget, seeds.random);
      break;
  }
  return out;
}

GraphStats cmd_stats(const std::filesystem::path& dataset, bool directed, std::ostream& out) {
  const Graph g = load_edge_list(dataset, directed);
  const GraphStats s = graph_stats(g);
  out << std::left << std::setw(24) << "dataset" << dataset.stem().string() << '\n'
      << std::setw(24) << "type" << (directed ? "directed" : "undirected") << '\n'
      << std::setw(24) << "nodes" << s.nodes << '\n'
      << std::setw(24) << "edges" << s.edges << '\n'
      << std::setw(24) << "max_degree" << s.max_degree << '\n'
      << std::setw(24) << "avg_degree" << std::fixed << std::setprecision(2) << s.avg_degree << '\n';
  out.unsetf(std::ios::floatfield);
  return s;
}

std::vector<ExperimentRecord> cmd_run(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExperimentSetup setup = prepare_experiment(cfg);
  const std::string prob = std::string(prob_model_name(cfg.prob_model));
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<ExperimentRecord> records;
  std::ostringstream diagnostics;
  diagnostics << "dataset,prob_model,budget,soft_objective,surrogate_profit,seed_size,cost_used,mu\n";
  std::ostringstream bounds;
  bounds << "budget,min_seed_size,max_seed_size\n";

  for (Scalar budget : cfg.budgets) {
    const CellSeeds seeds = cell_seeds(cfg.seed, budget);
    bounds << format_number(budget) << ','
           << static_cast<std::size_t>(std::floor(budget / setup.cost_benefit.cost.maxCoeff())) << ','
           << static_cast<std::size_t>(std::floor(budget / setup.cost_benefit.cost.minCoeff())) << '\n';
    for (Method method : cfg.methods) {
      const auto start = std::chrono::steady_clock::now();
      const MethodOutcome outcome = run_method(method, setup, cfg, budget);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      require(mask_cost(outcome.mask, setup.cost_benefit.cost) <= budget, "selection exceeded the budget");
      const ProfitEstimate est = evaluate_profit(setup.graph, setup.probabilities, setup.cost_benefit, outcome.mask,
                                                 cfg.eval_rollouts, seeds.evaluation, cfg.workers);
      records.push_back(ExperimentRecord{cfg.dataset_name, prob, budget, std::string(method_name(method)), est.profit,
                                         mask_count(outcome.mask), elapsed.count(), cfg.seed});
      if (outcome.diagnostics) {
        const auto& d = *outcome.diagnostics;
        diagnostics << cfg.dataset_name << ',' << prob << ',' << format_number(budget) << ','
                    << format_number(d.soft_objective) << ',' << format_number(d.surrogate_profit) << ','
                    << d.seed_count << ',' << format_number(d.cost_used) << ',' << format_number(d.mu) << '\n';
      }
      std::clog << cfg.dataset_name << ' ' << prob << " B=" << format_number(budget) << ' ' << method_name(method)
                << " profit=" << est.profit << " seeds=" << mask_count(outcome.mask) << " time=" << elapsed.count()
                << "s\n";
    }
  }

  auto records_out = open_output(cfg.out_dir / "records.csv");
  write_records(records_out, records);
  open_output(cfg.out_dir / "budget_bounds.csv") << bounds.str();
  for (Method m : cfg.methods) {
    if (m == Method::kDeepPM) {
      open_output(cfg.out_dir / "deeppm_diagnostics.csv") << diagnostics.str();
      break;
    }
  }
  return records;
}

DeepPMRun cmd_train(const ExperimentConfig& cfg, Scalar budget, const std::filesystem::path& out_dir) {
  cfg.validate();
  const ExperimentSetup setup = prepare_experiment(cfg);
  DeepPMRun run = train_deeppm(setup, cfg, budget);
  std::filesystem::create_directories(out_dir);
  save_checkpoint(out_dir / "checkpoint.txt", run.checkpoint);
  auto loss = open_output(out_dir / "train_loss.csv");
  loss << "epoch,L_diff,L_AE,L_total\n";
  for (const auto& e : run.history) {
    loss << e.epoch << ',' << format_number(e.diffusion) << ',' << format_number(e.reconstruction) << ','
         << format_number(e.total) << '\n';
  }
  return run;
}

Selection cmd_select(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint_path,
                     std::optional<Scalar> budget, const std::filesystem::path& out_dir) {
  cfg.validate();
  const ExperimentSetup setup = prepare_experiment(cfg);
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  const Scalar b = budget.value_or(ckpt.budget);
  const ExperimentConfig cell = with_cell_seeds(cfg, cell_seeds(cfg.seed, b));
  Selection sel = select_seeds(setup.graph, setup.cost_benefit, b, ckpt, cell.inference);
  std::filesystem::create_directories(out_dir);
  auto out = open_output(out_dir / "seeds.txt");
  write_seed_set(out, setup.graph, sel.mask);
  return sel;
}

std::vector<std::filesystem::path> cmd_plotdata(const std::filesystem::path& records_csv,
                                                const std::filesystem::path& out_dir) {
  std::ifstream in(records_csv);
  if (!in) throw Error("cannot open records " + records_csv.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("records CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw ParseError("records CSV: unexpected header '" + line + "'");

  static constexpr std::pair<const char*, std::size_t> kMetrics[] = {{"profit", 4}, {"seed_size", 5}, {"time_sec", 6}};
  std::vector<std::string> groups;
  std::map<std::string, std::vector<std::vector<std::string>>> rows_by_group;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 8) throw ParseError("records CSV line " + std::to_string(line_no) + ": expected 8 fields");
    const std::string key = fields[0] + "_" + fields[1];
    if (!rows_by_group.contains(key)) groups.push_back(key);
    rows_by_group[key].push_back(std::move(fields));
  }
  if (groups.empty()) throw ParseError("records CSV has no rows");

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& key : groups) {
    for (const auto& [metric, column] : kMetrics) {
      const auto path = out_dir / (key + "_" + metric + ".csv");
      auto out = open_output(path);
      out << "budget,method,value\n";
      for (const auto& row : rows_by_group[key]) out << row[2] << ',' << row[3] << ',' << row[column] << '\n';
      written.push_back(path);
    }
  }
  return written;
}

void write_seed_set(std::ostream& out, const Graph& g, const HardMask& mask) {
  require_shape(mask.size() == g.node_count(), "seed mask length must equal node count");
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out << g.original_id(static_cast<Node>(i)) << '\n';
}

HardMask read_seed_set(std::istream& in, const Graph& g) {
  std::map<std::int64_t, Node> index;
  for (std::size_t i = 0; i < g.node_count(); ++i) index.emplace(g.original_id(static_cast<Node>(i)), static_cast<Node>(i));
  HardMask mask(g.node_count(), 0);
  std::string token;
  while (in >> token) {
    std::int64_t id = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
    if (ec != std::errc{} || ptr != token.data() + token.size()) throw ParseError("seed set: bad node id '" + token + "'");
    const auto it = index.find(id);
    if (it == index.end()) throw ValidationError("seed set: node " + token + " is not in the graph");
    mask[static_cast<std::size_t>(it->second)] = 1;
  }
  return mask;
}

}  // namespace deeppm
