#pragma once

#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "porank/evaluate.hpp"
#include "porank/inference.hpp"
#include "porank/mle.hpp"
#include "porank/partial_order.hpp"
#include "porank/simulate.hpp"

namespace porank {

using nlohmann::json;

/// mle | conservative | aggressive | fixed:<value>
struct ThresholdChoice {
  std::variant<ThresholdRule, double> rule = ThresholdRule::Mle;

  static ThresholdChoice parse(const std::string& text);
  std::string describe() const;
  bool needs_bounds() const;
  /// Throws std::runtime_error if bounds are required but missing.
  double resolve(double lambda_hat, const std::optional<ThresholdBounds>& bounds) const;
};

json levels_to_json(const LevelDecomposition& levels, const ItemRegistry& names);

/// Fit summary: items, scores, lambda, diagnostics, and (when available)
/// the inference keys sigma2_lambda, sigma2_scores, delta_hat, Delta,
/// lambda_lower, lambda_upper.
json fit_to_json(const ComparisonDataset& d, LinkModel m, const FitResult& fit,
                 const std::optional<InferenceReport>& inference,
                 const std::string& inference_error = {});

json truth_to_json(const GroundTruth& gt, const ItemRegistry& names);

/// Parsed back from files written by fit_to_json / truth_to_json.
struct StoredFit {
  ItemRegistry items;
  Eigen::VectorXd scores;
  double lambda_hat = 0.0;
  std::optional<ThresholdBounds> bounds;
};
StoredFit stored_fit_from_json(const json& j);

struct StoredTruth {
  ItemRegistry items;
  GroundTruth truth;
};
StoredTruth stored_truth_from_json(const json& j);

json stats_to_json(const SummaryStats& s);
json experiment_to_json(const ExperimentReport& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace porank
