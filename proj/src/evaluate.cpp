#include "porank/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

namespace porank {

ConfusionCells confusion(const PairSet& detected_incomparable, const PairSet& true_incomparable,
                         std::size_t n) {
  ConfusionCells cells;
  for (const auto& [i, j] : all_pairs(n)) {
    const bool detected = detected_incomparable.contains(i, j);
    const bool truly = true_incomparable.contains(i, j);
    if (detected)
      ++(truly ? cells.n11 : cells.n10);
    else
      ++(truly ? cells.n01 : cells.n00);
  }
  return cells;
}

FdrPower fdr_power(const ConfusionCells& c) {
  FdrPower out;
  const auto detected = c.n10 + c.n11;
  const auto truly = c.n01 + c.n11;
  out.fdr = detected == 0 ? 0.0 : static_cast<double>(c.n10) / static_cast<double>(detected);
  out.power = truly == 0 ? 1.0 : static_cast<double>(c.n11) / static_cast<double>(truly);
  return out;
}

F1Scores f1_scores(std::span<const PairClass> truth, std::span<const PairClass> pred) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("f1_scores: truth and prediction cover different pair sets");
  if (truth.empty()) throw std::invalid_argument("f1_scores: no pairs to score");
  constexpr std::size_t kClasses = 3;
  std::array<std::size_t, kClasses> tp{}, fp{}, fn{};
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const auto t = static_cast<std::size_t>(truth[k]);
    const auto p = static_cast<std::size_t>(pred[k]);
    if (t == p) {
      ++tp[t];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  F1Scores out;
  double macro_sum = 0.0;
  std::size_t present = 0;
  std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
  for (std::size_t c = 0; c < kClasses; ++c) {
    tp_all += tp[c];
    fp_all += fp[c];
    fn_all += fn[c];
    const auto denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom == 0) continue;  // class absent from both sides
    ++present;
    macro_sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
  }
  out.macro = macro_sum / static_cast<double>(present);
  out.micro = 2.0 * static_cast<double>(tp_all) / static_cast<double>(2 * tp_all + fp_all + fn_all);
  return out;
}

F1Scores f1_scores(const PairClasses& truth, const PairClasses& pred) {
  if (truth.n != pred.n)
    throw std::invalid_argument("f1_scores: truth and prediction have different item counts");
  return f1_scores(std::span<const PairClass>(truth.classes), std::span<const PairClass>(pred.classes));
}

OrderAgreement correctness_completeness(const PartialOrder& reference, const PartialOrder& estimate) {
  if (reference.num_items() != estimate.num_items())
    throw std::invalid_argument("correctness_completeness: item universes differ");
  OrderAgreement out;
  for (const auto& [i, j] : all_pairs(reference.num_items())) {
    const bool ref_comparable = reference.comparable(i, j);
    if (ref_comparable) ++out.reference_comparable;
    if (!estimate.comparable(i, j) || !ref_comparable) continue;
    if (estimate.precedes(i, j) == reference.precedes(i, j))
      ++out.concordant;
    else
      ++out.discordant;
  }
  const auto decided = out.concordant + out.discordant;
  if (decided == 0)
    out.correctness.reason = "no pair is comparable in both relations";
  else
    out.correctness.value = static_cast<double>(out.concordant) / static_cast<double>(decided);
  if (out.reference_comparable == 0)
    out.completeness.reason = "reference relation has no comparable pair";
  else
    out.completeness.value =
        static_cast<double>(decided) / static_cast<double>(out.reference_comparable);
  if (out.correctness.value && out.completeness.value)
    out.geomean.value = std::sqrt(*out.correctness.value * *out.completeness.value);
  else
    out.geomean.reason = !out.correctness.value ? out.correctness.reason : out.completeness.reason;
  return out;
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

std::string_view to_string(ThresholdRule r) {
  switch (r) {
    case ThresholdRule::Mle: return "mle";
    case ThresholdRule::Conservative: return "conservative";
    case ThresholdRule::Aggressive: return "aggressive";
  }
  return "unknown";
}

double pick_threshold(const ThresholdBounds& b, ThresholdRule r) {
  switch (r) {
    case ThresholdRule::Mle: return b.lambda_hat;
    case ThresholdRule::Conservative: return b.lambda_lower;
    case ThresholdRule::Aggressive: return b.lambda_upper;
  }
  return b.lambda_hat;
}

ExperimentReport run_simulation_experiment(const SimConfig& cfg, LinkModel fit_model,
                                           const SolverConfig& solver) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.fit_model = fit_model;

  std::vector<double> macro, micro;
  std::array<std::vector<double>, 3> fdr, power;
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    ReplicationOutcome out;
    out.replication = r;
    const SimulatedData sim = generate(cfg, r);
    const PairClasses truth = ground_truth_classes(sim.truth);
    const PairSet true_incomparable = incomparable_set(sim.truth.scores_star, sim.truth.lambda_star);
    try {
      const FitResult fitted = fit(sim.data, fit_model, solver);
      out.converged = fitted.converged;
      out.lambda_hat = fitted.theta_hat.lambda;
      const F1Scores f1 =
          f1_scores(truth, classify_pairs(fitted.theta_hat.scores, fitted.theta_hat.lambda));
      out.macro_f1 = f1.macro;
      out.micro_f1 = f1.micro;
      try {
        const InferenceReport inf = infer(sim.data, fit_model, fitted);
        out.Delta = inf.bounds.Delta;
        out.inference_ok = true;
        for (std::size_t k = 0; k < kThresholdRules.size(); ++k) {
          const PairSet detected = incomparable_set(fitted.theta_hat.scores,
                                                    pick_threshold(inf.bounds, kThresholdRules[k]));
          out.fdr_power[k] = fdr_power(confusion(detected, true_incomparable, cfg.n));
        }
      } catch (const std::exception& e) {
        spdlog::warn("replication {}: inference failed: {}", r, e.what());
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      spdlog::warn("replication {}: fit failed: {}", r, e.what());
    }

    if (out.failed) {
      ++report.failures;
    } else {
      if (!out.converged) ++report.nonconverged;
      macro.push_back(out.macro_f1);
      micro.push_back(out.micro_f1);
      if (out.inference_ok) {
        for (std::size_t k = 0; k < 3; ++k) {
          fdr[k].push_back(out.fdr_power[k].fdr);
          power[k].push_back(out.fdr_power[k].power);
        }
      } else {
        ++report.inference_failures;
      }
    }
    report.replications.push_back(std::move(out));
  }

  report.macro_f1 = summarize(macro);
  report.micro_f1 = summarize(micro);
  for (std::size_t k = 0; k < 3; ++k) {
    report.fdr[k] = summarize(fdr[k]);
    report.power[k] = summarize(power[k]);
    const auto count = static_cast<double>(fdr[k].size());
    if (count > 0) {
      report.fdr_zero_fraction[k] =
          static_cast<double>(std::count(fdr[k].begin(), fdr[k].end(), 0.0)) / count;
      report.power_one_fraction[k] =
          static_cast<double>(std::count(power[k].begin(), power[k].end(), 1.0)) / count;
    }
  }
  return report;
}

std::string format_stats_table(const std::string& title,
                               const std::vector<std::pair<std::string, SummaryStats>>& rows) {
  std::size_t width = 4;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  std::ostringstream os;
  os << title << '\n';
  os << std::left << std::setw(static_cast<int>(width)) << "" << std::right;
  for (const char* h : {"min", "mean", "max", "std"}) os << std::setw(10) << h;
  os << '\n' << std::fixed << std::setprecision(4);
  for (const auto& [name, s] : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << name << std::right;
    os << std::setw(10) << s.min << std::setw(10) << s.mean << std::setw(10) << s.max
       << std::setw(10) << s.std << '\n';
  }
  return os.str();
}

DataSplit train_test_split(const ComparisonDataset& d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  const std::size_t total = d.num_comparisons();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t k = total; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
  const auto n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(total)));
  if (n_train == 0 || n_train == total)
    throw DataError("split would leave the training or test part empty");
  // Keep original observation order inside each part.
  std::vector<char> in_train(total, 0);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = 1;
  std::vector<Comparison> train, test;
  for (std::size_t k = 0; k < total; ++k)
    (in_train[k] ? train : test).push_back(d.comparisons()[k]);
  DataSplit split;
  split.train.emplace(d.items(), std::move(train));
  split.test.emplace(d.items(), std::move(test));
  return split;
}

}  // namespace porank
