#include "porank/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "porank/comparisons.hpp"
#include "porank/evaluate.hpp"
#include "porank/inference.hpp"
#include "porank/mle.hpp"
#include "porank/partial_order.hpp"
#include "porank/report.hpp"
#include "porank/simulate.hpp"

namespace porank {

namespace fs = std::filesystem;

namespace {

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("PORANK_LOG_LEVEL"))
    spdlog::set_level(spdlog::level::from_str(level));
}

void require_output_dir(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw DataError("output directory '" + parent.string() + "' does not exist");
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string() + suffix;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- fit -------------------------------------------------------------------

struct FitOptions {
  std::string model = "bradley-terry";
  std::string input;
  std::string out;
  std::string levels_out;
  std::string dot_out;
  std::string threshold = "mle";
  SolverConfig solver;
};

int cmd_fit(const FitOptions& o) {
  const LinkModel model = parse_link(o.model);
  const ThresholdChoice threshold = ThresholdChoice::parse(o.threshold);
  const std::string levels_out = o.levels_out.empty() ? sibling_path(o.out, ".levels.json") : o.levels_out;
  for (const auto& p : {o.out, levels_out, o.dot_out}) require_output_dir(p);

  const ComparisonDataset data = load_csv(o.input);
  const FitResult fitted = fit(data, model, o.solver);

  std::optional<InferenceReport> inference;
  std::string inference_error;
  try {
    inference = infer(data, model, fitted);
  } catch (const std::exception& e) {
    inference_error = e.what();
    spdlog::warn("variance estimation unavailable: {}", e.what());
  }

  json out = fit_to_json(data, model, fitted, inference, inference_error);
  double cut = 0.0;
  try {
    cut = threshold.resolve(fitted.theta_hat.lambda,
                            inference ? std::optional(inference->bounds) : std::nullopt);
  } catch (const std::exception& e) {
    write_text_file(o.out, dump(out));
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  const PartialOrder order = lambda_cut(fitted.theta_hat.scores, cut);
  const LevelDecomposition levels = level_decomposition(order, fitted.theta_hat.scores);
  out["threshold"] = {{"rule", threshold.describe()}, {"value", cut}};
  out["levels"] = levels_to_json(levels, data.items());

  write_text_file(o.out, dump(out));
  write_text_file(levels_out, dump(levels_to_json(levels, data.items())));
  if (!o.dot_out.empty()) write_text_file(o.dot_out, export_dot(order, levels, data.items()));

  if (!fitted.converged) {
    std::cerr << "warning: fit did not converge (grad_norm " << fitted.grad_norm << ")\n";
    for (const auto& d : fitted.diagnostics) std::cerr << "  " << d << '\n';
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  SimConfig cfg;
  std::string model = "bradley-terry";
  std::string out;
};

int cmd_simulate(SimulateOptions o) {
  o.cfg.model = parse_link(o.model);
  o.cfg.validate();
  require_output_dir(o.out);
  const std::size_t reps = o.cfg.replications;
  const int width = std::max(2, static_cast<int>(std::to_string(reps - 1).size()));
  for (std::size_t r = 0; r < reps; ++r) {
    std::string prefix = o.out;
    if (reps > 1) {
      std::ostringstream os;
      os << o.out << "_r" << std::setw(width) << std::setfill('0') << r;
      prefix = os.str();
    }
    const SimulatedData sim = generate(o.cfg, r);
    write_csv(prefix + ".csv", sim.data);
    json truth = truth_to_json(sim.truth, sim.data.items());
    truth["model"] = std::string(to_string(o.cfg.model));
    truth["seed"] = o.cfg.seed;
    truth["replication"] = r;
    write_text_file(prefix + ".truth.json", dump(truth));
  }
  return kExitOk;
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateOptions {
  // Self-contained simulation mode.
  SimConfig cfg;
  std::string generator = "bradley-terry";
  std::string fit_models = "uniform,bradley-terry,thurstone-mosteller";
  std::string lambda_grid;
  std::string out;
  SolverConfig solver;
  // File mode.
  std::string fit_path;
  std::string truth_path;
  std::string threshold = "mle";
};

std::vector<LinkModel> parse_model_list(const std::string& text) {
  std::vector<LinkModel> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_link(item));
  if (out.empty()) throw std::invalid_argument("no fit models given");
  return out;
}

std::string format_lambda(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

int evaluate_simulation(const EvaluateOptions& o) {
  SimConfig base = o.cfg;
  base.model = parse_link(o.generator);
  base.validate();
  const auto models = parse_model_list(o.fit_models);
  const std::vector<double> grid =
      o.lambda_grid.empty() ? std::vector<double>{base.lambda_star} : parse_grid(o.lambda_grid);
  for (const auto& suffix : {".json", ".txt", "_fdr_power.csv"}) require_output_dir(o.out + suffix);

  json runs = json::array();
  std::ostringstream text;
  std::ostringstream csv;
  csv << "lambda_star,fit_model,rule,fdr_mean,power_mean,fdr_zero_fraction,power_one_fraction,"
         "replications_used\n";
  csv << std::setprecision(10);
  std::vector<std::vector<ExperimentReport>> by_model(models.size());
  for (const double lambda_star : grid) {
    SimConfig cfg = base;
    cfg.lambda_star = lambda_star;
    std::vector<std::pair<std::string, SummaryStats>> macro_rows, micro_rows;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      ExperimentReport report = run_simulation_experiment(cfg, models[mi], o.solver);
      const std::string name(to_string(models[mi]));
      macro_rows.emplace_back(name, report.macro_f1);
      micro_rows.emplace_back(name, report.micro_f1);
      for (std::size_t k = 0; k < kThresholdRules.size(); ++k)
        csv << lambda_star << ',' << name << ',' << to_string(kThresholdRules[k]) << ','
            << report.fdr[k].mean << ',' << report.power[k].mean << ','
            << report.fdr_zero_fraction[k] << ',' << report.power_one_fraction[k] << ','
            << report.fdr[k].count << '\n';
      runs.push_back(experiment_to_json(report));
      by_model[mi].push_back(std::move(report));
    }
    const std::string tag = " (lambda* = " + format_lambda(lambda_star) + ", " +
                            std::to_string(cfg.replications) + " replications)";
    text << format_stats_table("Macro-F1" + tag, macro_rows) << '\n';
    text << format_stats_table("Micro-F1" + tag, micro_rows) << '\n';
  }
  if (grid.size() > 1) {
    for (const auto& [label, pick] :
         {std::pair{"Macro-F1", &ExperimentReport::macro_f1},
          std::pair{"Micro-F1", &ExperimentReport::micro_f1}}) {
      text << "Mean " << label << " by lambda*\n" << std::left << std::setw(22) << "" << std::right;
      for (const double l : grid) text << std::setw(10) << format_lambda(l);
      text << '\n' << std::fixed << std::setprecision(4);
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        text << std::left << std::setw(22) << to_string(models[mi]) << std::right;
        for (const auto& r : by_model[mi]) text << std::setw(10) << (r.*pick).mean;
        text << '\n';
      }
      text << std::defaultfloat << '\n';
    }
  }

  write_text_file(o.out + ".json", dump(json{{"runs", runs}}));
  write_text_file(o.out + ".txt", text.str());
  write_text_file(o.out + "_fdr_power.csv", csv.str());
  std::cout << text.str();
  return kExitOk;
}

json ratio_json(const Ratio& r) {
  if (r.value) return *r.value;
  return {{"value", nullptr}, {"reason", r.reason}};
}

int evaluate_files(const EvaluateOptions& o) {
  require_output_dir(o.out + ".json");
  const StoredFit fitted = stored_fit_from_json(read_json_file(o.fit_path));
  const StoredTruth truth = stored_truth_from_json(read_json_file(o.truth_path));
  if (fitted.items.size() != truth.items.size())
    throw DataError("fit and ground truth cover different item sets");
  // Reorder the truth into the fit's item order.
  Eigen::VectorXd star(fitted.scores.size());
  for (ItemId i = 0; i < fitted.items.size(); ++i) {
    const auto k = truth.items.find(fitted.items.name(i));
    if (!k) throw DataError("item '" + fitted.items.name(i) + "' is missing from the ground truth");
    star(static_cast<Eigen::Index>(i)) = truth.truth.scores_star(static_cast<Eigen::Index>(*k));
  }
  const double lambda_star = truth.truth.lambda_star;
  const double cut = ThresholdChoice::parse(o.threshold).resolve(fitted.lambda_hat, fitted.bounds);

  const std::size_t n = fitted.items.size();
  const F1Scores f1 = f1_scores(classify_pairs(star, lambda_star), classify_pairs(fitted.scores, cut));
  const ConfusionCells cells =
      confusion(incomparable_set(fitted.scores, cut), incomparable_set(star, lambda_star), n);
  const FdrPower fp = fdr_power(cells);
  const OrderAgreement agreement =
      correctness_completeness(lambda_cut(star, lambda_star), lambda_cut(fitted.scores, cut));

  json out = {{"threshold", {{"rule", o.threshold}, {"value", cut}}},
              {"macro_f1", f1.macro},
              {"micro_f1", f1.micro},
              {"fdr", fp.fdr},
              {"power", fp.power},
              {"confusion", {{"N00", cells.n00}, {"N01", cells.n01}, {"N10", cells.n10}, {"N11", cells.n11}}},
              {"concordant", agreement.concordant},
              {"discordant", agreement.discordant},
              {"correctness", ratio_json(agreement.correctness)},
              {"completeness", ratio_json(agreement.completeness)},
              {"geomean", ratio_json(agreement.geomean)}};
  write_text_file(o.out + ".json", dump(out));
  std::cout << dump(out);
  return kExitOk;
}

// ---- export-dag ------------------------------------------------------------

struct ExportOptions {
  std::string fit_path;
  std::string threshold = "mle";
  std::string dot_out;
  std::string levels_out;
};

int cmd_export_dag(const ExportOptions& o) {
  require_output_dir(o.dot_out);
  require_output_dir(o.levels_out);
  const StoredFit fitted = stored_fit_from_json(read_json_file(o.fit_path));
  const double cut = ThresholdChoice::parse(o.threshold).resolve(fitted.lambda_hat, fitted.bounds);
  const PartialOrder order = lambda_cut(fitted.scores, cut);
  const LevelDecomposition levels = level_decomposition(order, fitted.scores);
  write_text_file(o.dot_out, export_dot(order, levels, fitted.items));
  if (!o.levels_out.empty())
    write_text_file(o.levels_out, dump(levels_to_json(levels, fitted.items)));
  return kExitOk;
}

// ---- alpha-cut -------------------------------------------------------------

struct AlphaOptions {
  std::string input;
  double alpha = 0.75;
  std::string out;
  std::string dot_out;
};

int cmd_alpha_cut(const AlphaOptions& o) {
  require_output_dir(o.out);
  require_output_dir(o.dot_out);
  const ComparisonDataset data = load_csv(o.input);
  const AlphaCut cut = empirical_alpha_cut(data, o.alpha);
  json relation = json::array();
  for (const auto& [i, j] : cut.relation.pairs())
    relation.push_back({data.items().name(i), data.items().name(j)});
  json out = {{"alpha", o.alpha},
              {"items", data.items().names()},
              {"relation", relation},
              {"axioms",
               {{"irreflexive", cut.axioms.irreflexive},
                {"asymmetric", cut.axioms.asymmetric},
                {"transitive", cut.axioms.transitive}}},
              {"is_partial_order", cut.axioms.is_partial_order()}};
  std::optional<LevelDecomposition> levels;
  try {
    levels = level_decomposition(cut.relation);
    out["levels"] = levels_to_json(*levels, data.items());
  } catch (const CycleError& e) {
    out["levels"] = nullptr;
    spdlog::warn("alpha-cut relation is cyclic: {}", e.what());
  }
  write_text_file(o.out, dump(out));
  if (!o.dot_out.empty()) {
    if (!levels) {
      std::cerr << "error: cannot draw a cyclic relation\n";
      return kExitError;
    }
    write_text_file(o.dot_out, export_dot(cut.relation, *levels, data.items()));
  }
  if (!cut.axioms.is_partial_order())
    std::cerr << "note: the alpha-cut is not a partial order at alpha = " << o.alpha << '\n';
  return kExitOk;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& s) {
  cmd->add_option("--tol", s.tol, "Gradient infinity-norm tolerance")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "Newton iteration limit")->capture_default_str();
  cmd->add_option("--lambda-cap", s.lambda_cap, "Upper bound on the margin")->capture_default_str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad grid '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
    throw std::invalid_argument("grid must be start:step:stop with step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[1]);
  return out;
}

int run_cli(const std::vector<std::string>& args) {
  configure_logging();
  CLI::App app{"Partial rankings from pairwise comparisons with abstentions"};
  app.require_subcommand(1);

  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit scores and margin to a comparison CSV");
  fit_cmd->add_option("--model", fit_opts.model, "uniform | bradley-terry | thurstone-mosteller")
      ->capture_default_str();
  fit_cmd->add_option("--input", fit_opts.input, "Comparison CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", fit_opts.out, "Fit JSON output")->required();
  fit_cmd->add_option("--levels", fit_opts.levels_out, "Level JSON output (default <out>.levels.json)");
  fit_cmd->add_option("--dot", fit_opts.dot_out, "Graphviz output of the partial order");
  fit_cmd->add_option("--threshold", fit_opts.threshold, "mle | conservative | aggressive | fixed:<v>")
      ->capture_default_str();
  add_solver_flags(fit_cmd, fit_opts.solver);

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate synthetic comparisons with known truth");
  sim_cmd->add_option("--n", sim_opts.cfg.n, "Number of items")->capture_default_str();
  sim_cmd->add_option("--N", sim_opts.cfg.N, "Number of comparisons")->capture_default_str();
  sim_cmd->add_option("--lambda-star", sim_opts.cfg.lambda_star, "True margin")->capture_default_str();
  sim_cmd->add_option("--score-scale", sim_opts.cfg.score_scale, "Std of true scores")->capture_default_str();
  sim_cmd->add_option("--model", sim_opts.model, "Noise model")->capture_default_str();
  sim_cmd->add_option("--seed", sim_opts.cfg.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--replications", sim_opts.cfg.replications, "Number of datasets")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim_opts.out, "Output prefix")->required();

  EvaluateOptions eval_opts;
  eval_opts.cfg.replications = 20;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score fits against ground truth");
  eval_cmd->add_option("--n", eval_opts.cfg.n, "Number of items")->capture_default_str();
  eval_cmd->add_option("--N", eval_opts.cfg.N, "Comparisons per dataset")->capture_default_str();
  eval_cmd->add_option("--lambda-star", eval_opts.cfg.lambda_star, "True margin")->capture_default_str();
  eval_cmd->add_option("--lambda-grid", eval_opts.lambda_grid, "Sweep of true margins, start:step:stop");
  eval_cmd->add_option("--score-scale", eval_opts.cfg.score_scale, "Std of true scores")
      ->capture_default_str();
  eval_cmd->add_option("--generator", eval_opts.generator, "Noise model of the simulated data")
      ->capture_default_str();
  eval_cmd->add_option("--fit-models", eval_opts.fit_models, "Comma-separated models to fit")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval_opts.cfg.seed, "RNG seed")->capture_default_str();
  eval_cmd->add_option("--replications", eval_opts.cfg.replications, "Replications per setting")
      ->capture_default_str();
  auto* fit_file = eval_cmd->add_option("--fit", eval_opts.fit_path, "Fit JSON (file mode)")
                       ->check(CLI::ExistingFile);
  auto* truth_file = eval_cmd->add_option("--truth", eval_opts.truth_path, "Ground-truth JSON (file mode)")
                         ->check(CLI::ExistingFile);
  fit_file->needs(truth_file);
  truth_file->needs(fit_file);
  eval_cmd->add_option("--threshold", eval_opts.threshold, "Threshold rule for file mode")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_opts.out, "Output prefix")->required();
  add_solver_flags(eval_cmd, eval_opts.solver);

  ExportOptions export_opts;
  auto* export_cmd = app.add_subcommand("export-dag", "Draw the partial order of a stored fit");
  export_cmd->add_option("--fit", export_opts.fit_path, "Fit JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--threshold", export_opts.threshold, "mle | conservative | aggressive | fixed:<v>")
      ->capture_default_str();
  export_cmd->add_option("--dot", export_opts.dot_out, "Graphviz output")->required();
  export_cmd->add_option("--levels", export_opts.levels_out, "Level JSON output");

  AlphaOptions alpha_opts;
  auto* alpha_cmd = app.add_subcommand("alpha-cut", "Empirical win-frequency baseline");
  alpha_cmd->add_option("--input", alpha_opts.input, "Comparison CSV")->required()->check(CLI::ExistingFile);
  alpha_cmd->add_option("--alpha", alpha_opts.alpha, "Cut level in (0.5, 1]")->capture_default_str();
  alpha_cmd->add_option("--out", alpha_opts.out, "Relation JSON output")->required();
  alpha_cmd->add_option("--dot", alpha_opts.dot_out, "Graphviz output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_opts);
    if (*sim_cmd) return cmd_simulate(sim_opts);
    if (*eval_cmd) return eval_opts.fit_path.empty() ? evaluate_simulation(eval_opts) : evaluate_files(eval_opts);
    if (*export_cmd) return cmd_export_dag(export_opts);
    if (*alpha_cmd) return cmd_alpha_cut(alpha_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace porank
