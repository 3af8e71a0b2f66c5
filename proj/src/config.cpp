#include "deeppm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace deeppm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const auto item = trim(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError("config key '" + std::string(key) + "': expected a non-negative integer, got '" +
                     std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kDeepPM: return "DeepPM";
    case Method::kSimpleGreedy: return "SG";
    case Method::kStochasticGreedy: return "StG";
    case Method::kDoubleGreedy: return "DG";
    case Method::kSingleDiscount: return "SD";
    case Method::kDegreeDiscount: return "DD";
    case Method::kHighDegree: return "HD";
    case Method::kHighClustering: return "HC";
    case Method::kRandom: return "Random";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  throw ValidationError("unknown method '" + std::string(name) + "' (expected DeepPM, SG, StG, DG, SD, DD, HD, HC or Random)");
}

std::string_view prob_model_name(const ProbabilityModel& model) {
  return model.kind == ProbabilityModel::Kind::kUniform ? "uniform" : "trivalency";
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void ExperimentConfig::validate() const {
  require(!dataset.empty(), "config: dataset path is required");
  require(!budgets.empty(), "config: at least one budget is required");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    require(budgets[i] > 0, "config: budgets must be strictly positive");
    require(i == 0 || budgets[i] > budgets[i - 1], "config: budgets must be strictly ascending");
  }
  require(!methods.empty(), "config: at least one method is required");
  require(eval_rollouts >= 1, "config: eval_rollouts must be at least 1");
  if (prob_model.kind == ProbabilityModel::Kind::kUniform)
    require(prob_model.p_c > 0 && prob_model.p_c <= 1, "config: p_c must lie in (0, 1]");
  for (const auto& r : {cost_range, benefit_range})
    require(r.lo > 0 && r.lo <= r.hi, "config: cost/benefit ranges must be positive with min <= max");
  train.validate();
  inference.validate();
  baseline.validate();
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"dataset", [&](auto, auto v) { cfg.dataset = std::filesystem::path(std::string(v)); }},
      {"dataset_name", [&](auto, auto v) { cfg.dataset_name = std::string(v); }},
      {"directed", [&](auto k, auto v) { cfg.directed = to_bool(k, v); }},
      {"prob_model",
       [&](auto, auto v) {
         if (v == "uniform") {
           cfg.prob_model.kind = ProbabilityModel::Kind::kUniform;
         } else if (v == "trivalency") {
           cfg.prob_model.kind = ProbabilityModel::Kind::kTrivalency;
         } else {
           throw ValidationError("config: prob_model must be 'uniform' or 'trivalency'");
         }
       }},
      {"p_c", [&](auto k, auto v) { cfg.prob_model.p_c = to_double(k, v); }},
      {"cost_min", [&](auto k, auto v) { cfg.cost_range.lo = to_double(k, v); }},
      {"cost_max", [&](auto k, auto v) { cfg.cost_range.hi = to_double(k, v); }},
      {"benefit_min", [&](auto k, auto v) { cfg.benefit_range.lo = to_double(k, v); }},
      {"benefit_max", [&](auto k, auto v) { cfg.benefit_range.hi = to_double(k, v); }},
      {"budgets",
       [&](auto k, auto v) {
         cfg.budgets.clear();
         for (auto item : split_list(v)) cfg.budgets.push_back(to_double(k, item));
       }},
      {"methods",
       [&](auto, auto v) {
         cfg.methods.clear();
         for (auto item : split_list(v)) cfg.methods.push_back(parse_method(item));
       }},
      {"eval_rollouts", [&](auto k, auto v) { cfg.eval_rollouts = to_unsigned(k, v); }},
      {"seed", [&](auto k, auto v) { cfg.seed = to_unsigned(k, v); }},
      {"out_dir", [&](auto, auto v) { cfg.out_dir = std::filesystem::path(std::string(v)); }},
      {"workers", [&](auto k, auto v) { cfg.workers = to_unsigned(k, v); }},
      {"train.masks", [&](auto k, auto v) { cfg.train.masks = to_unsigned(k, v); }},
      {"train.labels_per_mask", [&](auto k, auto v) { cfg.train.labels_per_mask = to_unsigned(k, v); }},
      {"train.epochs", [&](auto k, auto v) { cfg.train.epochs = to_unsigned(k, v); }},
      {"train.batch_size", [&](auto k, auto v) { cfg.train.batch_size = to_unsigned(k, v); }},
      {"train.lambda_diff", [&](auto k, auto v) { cfg.train.lambda_diff = to_double(k, v); }},
      {"train.lambda_ae", [&](auto k, auto v) { cfg.train.lambda_ae = to_double(k, v); }},
      {"train.hidden", [&](auto k, auto v) { cfg.train.surrogate_hidden = static_cast<Index>(to_unsigned(k, v)); }},
      {"train.bias", [&](auto k, auto v) { cfg.train.surrogate_bias = to_bool(k, v); }},
      {"train.seed_passthrough", [&](auto k, auto v) { cfg.train.surrogate_passthrough = to_bool(k, v); }},
      {"train.ae_hidden", [&](auto k, auto v) { cfg.train.ae_hidden = static_cast<Index>(to_unsigned(k, v)); }},
      {"train.latent_dim", [&](auto k, auto v) { cfg.train.latent_dim = static_cast<Index>(to_unsigned(k, v)); }},
      {"train.learning_rate", [&](auto k, auto v) { cfg.train.adam.learning_rate = to_double(k, v); }},
      {"infer.mu", [&](auto k, auto v) { cfg.inference.mu = to_double(k, v); }},
      {"infer.ascent_steps", [&](auto k, auto v) { cfg.inference.ascent_steps = to_unsigned(k, v); }},
      {"infer.step_size", [&](auto k, auto v) { cfg.inference.step_size = to_double(k, v); }},
      {"infer.restarts", [&](auto k, auto v) { cfg.inference.restarts = to_unsigned(k, v); }},
      {"infer.max_halvings", [&](auto k, auto v) { cfg.inference.max_halvings = to_unsigned(k, v); }},
      {"infer.candidate_cap", [&](auto k, auto v) { cfg.inference.candidate_cap = to_unsigned(k, v); }},
      {"baseline.rollouts", [&](auto k, auto v) { cfg.baseline.rollouts = to_unsigned(k, v); }},
      {"baseline.sample_fraction", [&](auto k, auto v) { cfg.baseline.sample_fraction = to_double(k, v); }},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    it->second(key, value);
  }

  if (!cfg.dataset.empty() && cfg.dataset.is_relative() && !base_dir.empty()) cfg.dataset = base_dir / cfg.dataset;
  if (cfg.dataset_name.empty()) cfg.dataset_name = cfg.dataset.stem().string();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "dataset_name=" << cfg.dataset_name << '\n'
      << "directed=" << cfg.directed << '\n'
      << "prob_model=" << prob_model_name(cfg.prob_model) << '\n'
      << "p_c=" << format_number(cfg.prob_model.p_c) << '\n'
      << "cost=" << format_number(cfg.cost_range.lo) << ',' << format_number(cfg.cost_range.hi) << '\n'
      << "benefit=" << format_number(cfg.benefit_range.lo) << ',' << format_number(cfg.benefit_range.hi) << '\n'
      << "train.masks=" << cfg.train.masks << '\n'
      << "train.labels_per_mask=" << cfg.train.labels_per_mask << '\n'
      << "train.epochs=" << cfg.train.epochs << '\n'
      << "train.batch_size=" << cfg.train.batch_size << '\n'
      << "train.lambda_diff=" << format_number(cfg.train.lambda_diff) << '\n'
      << "train.lambda_ae=" << format_number(cfg.train.lambda_ae) << '\n'
      << "train.hidden=" << cfg.train.surrogate_hidden << '\n'
      << "train.bias=" << cfg.train.surrogate_bias << '\n'
      << "train.seed_passthrough=" << cfg.train.surrogate_passthrough << '\n'
      << "train.ae_hidden=" << cfg.train.ae_hidden << '\n'
      << "train.latent_dim=" << cfg.train.latent_dim << '\n'
      << "train.learning_rate=" << format_number(cfg.train.adam.learning_rate) << '\n';
  return out.str();
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + 16, fnv1a(canonical_config(cfg)), 16);
  return std::string(buf, ptr);
}

}  // namespace deeppm
