#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "porank/comparisons.hpp"
#include "porank/inference.hpp"
#include "porank/links.hpp"
#include "porank/mle.hpp"
#include "porank/pair_classes.hpp"
#include "porank/partial_order.hpp"
#include "porank/simulate.hpp"

namespace porank {

/// Counts of the 2x2 detection table. First index: detected comparable (0)
/// or incomparable (1). Second index: truly comparable (0) or incomparable (1).
struct ConfusionCells {
  std::size_t n00 = 0;
  std::size_t n01 = 0;
  std::size_t n10 = 0;
  std::size_t n11 = 0;

  std::size_t total() const { return n00 + n01 + n10 + n11; }
};

/// Tallies every unordered pair of n items against the two incomparable sets.
ConfusionCells confusion(const PairSet& detected_incomparable, const PairSet& true_incomparable,
                         std::size_t n);

struct FdrPower {
  double fdr = 0.0;
  double power = 1.0;
};

/// FDR = n10 / (n10 + n11), 0 when nothing is detected incomparable.
/// Power = n11 / (n01 + n11), 1 when nothing is truly incomparable.
FdrPower fdr_power(const ConfusionCells& cells);

struct F1Scores {
  double macro = 0.0;
  double micro = 0.0;
};

/// Three-class F1 over unordered pairs. Macro averages per-class F1 over
/// the classes that occur in truth or prediction; micro pools the counts.
/// Throws std::invalid_argument if the pair universes differ.
F1Scores f1_scores(const PairClasses& truth, const PairClasses& pred);
F1Scores f1_scores(std::span<const PairClass> truth, std::span<const PairClass> pred);

/// A ratio that may be undefined; `reason` explains a missing value.
struct Ratio {
  std::optional<double> value;
  std::string reason;
};

struct OrderAgreement {
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t reference_comparable = 0;
  Ratio correctness;   ///< |C| / (|C| + |D|)
  Ratio completeness;  ///< (|C| + |D|) / #comparable pairs in the reference
  Ratio geomean;       ///< sqrt(correctness * completeness)
};

OrderAgreement correctness_completeness(const PartialOrder& reference, const PartialOrder& estimate);

struct SummaryStats {
  std::size_t count = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double std = 0.0;  ///< sample standard deviation (n - 1 denominator)
};

SummaryStats summarize(std::span<const double> values);

enum class ThresholdRule { Mle, Conservative, Aggressive };
inline constexpr std::array<ThresholdRule, 3> kThresholdRules = {
    ThresholdRule::Mle, ThresholdRule::Conservative, ThresholdRule::Aggressive};
std::string_view to_string(ThresholdRule r);
double pick_threshold(const ThresholdBounds& b, ThresholdRule r);

struct ReplicationOutcome {
  std::size_t replication = 0;
  bool failed = false;  ///< fit threw; metrics below are unset
  std::string error;
  bool converged = false;
  bool inference_ok = false;
  double lambda_hat = 0.0;
  double Delta = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  /// Indexed like kThresholdRules; only meaningful when inference_ok.
  std::array<FdrPower, 3> fdr_power{};
};

struct ExperimentReport {
  SimConfig config;
  LinkModel fit_model = LinkModel::BradleyTerry;
  std::vector<ReplicationOutcome> replications;
  std::size_t failures = 0;
  std::size_t nonconverged = 0;
  std::size_t inference_failures = 0;
  SummaryStats macro_f1;
  SummaryStats micro_f1;
  std::array<SummaryStats, 3> fdr;
  std::array<SummaryStats, 3> power;
  /// Share of replications with FDR exactly 0 / Power exactly 1, per rule.
  std::array<double, 3> fdr_zero_fraction{};
  std::array<double, 3> power_one_fraction{};
};

/// Generate, fit and score cfg.replications datasets. F1 uses the fitted
/// margin as threshold; FDR/Power are reported for all three rules. Fits
/// that throw are counted in `failures` and left out of the aggregates.
ExperimentReport run_simulation_experiment(const SimConfig& cfg, LinkModel fit_model,
                                           const SolverConfig& solver = {});

/// Aligned plain-text table with min/mean/max/std columns.
std::string format_stats_table(const std::string& title,
                               const std::vector<std::pair<std::string, SummaryStats>>& rows);

struct DataSplit {
  std::optional<ComparisonDataset> train;
  std::optional<ComparisonDataset> test;
};

/// Random split of the observations; both parts keep the full item registry.
/// Throws DataError if either side would be empty.
DataSplit train_test_split(const ComparisonDataset& d, double train_fraction, std::uint64_t seed);

}  // namespace porank
