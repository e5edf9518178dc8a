#include "porank/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace porank {

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

ThresholdChoice ThresholdChoice::parse(const std::string& text) {
  ThresholdChoice c;
  if (text == "mle") {
    c.rule = ThresholdRule::Mle;
  } else if (text == "conservative") {
    c.rule = ThresholdRule::Conservative;
  } else if (text == "aggressive") {
    c.rule = ThresholdRule::Aggressive;
  } else if (text.rfind("fixed:", 0) == 0) {
    std::size_t used = 0;
    const std::string number = text.substr(6);
    double value = 0.0;
    try {
      value = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size() || !(value >= 0.0))
      throw std::invalid_argument("fixed threshold must be a nonnegative number: '" + text + "'");
    c.rule = value;
  } else {
    throw std::invalid_argument("unknown threshold rule '" + text +
                                "' (expected mle, conservative, aggressive or fixed:<value>)");
  }
  return c;
}

std::string ThresholdChoice::describe() const {
  if (const auto* r = std::get_if<ThresholdRule>(&rule)) return std::string(to_string(*r));
  std::ostringstream os;
  os << "fixed:" << std::get<double>(rule);
  return os.str();
}

bool ThresholdChoice::needs_bounds() const {
  const auto* r = std::get_if<ThresholdRule>(&rule);
  return r && *r != ThresholdRule::Mle;
}

double ThresholdChoice::resolve(double lambda_hat,
                                const std::optional<ThresholdBounds>& bounds) const {
  if (const auto* v = std::get_if<double>(&rule)) return *v;
  const auto r = std::get<ThresholdRule>(rule);
  if (r == ThresholdRule::Mle) return lambda_hat;
  if (!bounds)
    throw std::runtime_error("threshold rule '" + describe() +
                             "' needs variance estimates, which are unavailable for this fit");
  return pick_threshold(*bounds, r);
}

json levels_to_json(const LevelDecomposition& levels, const ItemRegistry& names) {
  json out = json::array();
  for (const auto& group : levels.levels) {
    json g = json::array();
    for (const ItemId i : group) g.push_back(names.name(i));
    out.push_back(std::move(g));
  }
  return out;
}

json fit_to_json(const ComparisonDataset& d, LinkModel m, const FitResult& fit,
                 const std::optional<InferenceReport>& inference,
                 const std::string& inference_error) {
  json j;
  j["model"] = std::string(to_string(m));
  j["num_items"] = d.num_items();
  j["num_comparisons"] = d.num_comparisons();
  j["items"] = d.items().names();
  j["scores"] = vector_to_json(fit.theta_hat.scores);
  j["lambda"] = fit.theta_hat.lambda;
  j["nll"] = fit.nll;
  j["grad_norm"] = fit.grad_norm;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["lambda_fixed"] = fit.lambda_fixed;
  j["lambda_capped"] = fit.lambda_capped;
  j["diagnostics"] = fit.diagnostics;
  if (inference) {
    j["sigma2_lambda"] = inference->variances.sigma2_lambda;
    j["sigma2_scores"] = vector_to_json(inference->variances.sigma2_scores);
    j["delta_hat"] = inference->variances.delta_hat;
    j["Delta"] = inference->bounds.Delta;
    j["lambda_lower"] = inference->bounds.lambda_lower;
    j["lambda_upper"] = inference->bounds.lambda_upper;
  } else {
    for (const char* key :
         {"sigma2_lambda", "sigma2_scores", "delta_hat", "Delta", "lambda_lower", "lambda_upper"})
      j[key] = nullptr;
    j["inference_error"] = inference_error;
  }
  return j;
}

json truth_to_json(const GroundTruth& gt, const ItemRegistry& names) {
  json j;
  j["items"] = names.names();
  j["scores_star"] = vector_to_json(gt.scores_star);
  j["lambda_star"] = gt.lambda_star;
  return j;
}

StoredFit stored_fit_from_json(const json& j) {
  StoredFit f;
  f.items = ItemRegistry(j.at("items").get<std::vector<std::string>>());
  f.scores = vector_from_json(j.at("scores"));
  f.lambda_hat = j.at("lambda").get<double>();
  if (static_cast<std::size_t>(f.scores.size()) != f.items.size())
    throw DataError("fit file: 'items' and 'scores' have different lengths");
  if (j.contains("Delta") && !j.at("Delta").is_null())
    f.bounds = threshold_bounds(f.lambda_hat, j.at("Delta").get<double>());
  return f;
}

StoredTruth stored_truth_from_json(const json& j) {
  StoredTruth t;
  t.items = ItemRegistry(j.at("items").get<std::vector<std::string>>());
  t.truth.scores_star = vector_from_json(j.at("scores_star"));
  t.truth.lambda_star = j.at("lambda_star").get<double>();
  if (static_cast<std::size_t>(t.truth.scores_star.size()) != t.items.size())
    throw DataError("truth file: 'items' and 'scores_star' have different lengths");
  return t;
}

json stats_to_json(const SummaryStats& s) {
  return {{"count", s.count}, {"min", s.min}, {"mean", s.mean}, {"max", s.max}, {"std", s.std}};
}

json experiment_to_json(const ExperimentReport& r) {
  json j;
  j["generator"] = std::string(to_string(r.config.model));
  j["fit_model"] = std::string(to_string(r.fit_model));
  j["n"] = r.config.n;
  j["N"] = r.config.N;
  j["lambda_star"] = r.config.lambda_star;
  j["score_scale"] = r.config.score_scale;
  j["seed"] = r.config.seed;
  j["replications"] = r.config.replications;
  j["failures"] = r.failures;
  j["nonconverged"] = r.nonconverged;
  j["inference_failures"] = r.inference_failures;
  j["macro_f1"] = stats_to_json(r.macro_f1);
  j["micro_f1"] = stats_to_json(r.micro_f1);
  json rules = json::object();
  for (std::size_t k = 0; k < kThresholdRules.size(); ++k) {
    rules[std::string(to_string(kThresholdRules[k]))] = {
        {"fdr", stats_to_json(r.fdr[k])},
        {"power", stats_to_json(r.power[k])},
        {"fdr_zero_fraction", r.fdr_zero_fraction[k]},
        {"power_one_fraction", r.power_one_fraction[k]}};
  }
  j["thresholds"] = rules;
  json reps = json::array();
  for (const auto& o : r.replications) {
    json rep = {{"replication", o.replication}, {"failed", o.failed}};
    if (o.failed) {
      rep["error"] = o.error;
    } else {
      rep["converged"] = o.converged;
      rep["lambda_hat"] = o.lambda_hat;
      rep["macro_f1"] = o.macro_f1;
      rep["micro_f1"] = o.micro_f1;
      rep["inference_ok"] = o.inference_ok;
      if (o.inference_ok) {
        rep["Delta"] = o.Delta;
        for (std::size_t k = 0; k < kThresholdRules.size(); ++k)
          rep[std::string(to_string(kThresholdRules[k]))] = {{"fdr", o.fdr_power[k].fdr},
                                                             {"power", o.fdr_power[k].power}};
      }
    }
    reps.push_back(std::move(rep));
  }
  j["per_replication"] = std::move(reps);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace porank
