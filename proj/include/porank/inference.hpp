#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"
#include "porank/links.hpp"
#include "porank/mle.hpp"

namespace porank {

/// Asymptotic variances of the fitted parameters (inverse Fisher
/// information diagonal, not yet divided by the sample count).
struct VarianceEstimates {
  double sigma2_lambda = 0.0;
  Eigen::VectorXd sigma2_scores;
  /// Largest of sigma2_lambda and all sigma2_scores.
  double delta_hat = 0.0;
};

/// Conservative (lambda_lower) and aggressive (lambda_upper) thresholds
/// around the fitted margin: lambda_hat -/+ 3 * Delta.
struct ThresholdBounds {
  double lambda_hat = 0.0;
  double Delta = 0.0;
  double lambda_lower = 0.0;  ///< floored at 0
  double lambda_upper = 0.0;
};

/// Unordered item pairs stored as (min, max).
class PairSet {
 public:
  void insert(ItemId i, ItemId j);
  bool contains(ItemId i, ItemId j) const;
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool is_subset_of(const PairSet& other) const;
  const std::set<std::pair<ItemId, ItemId>>& pairs() const { return pairs_; }

  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::set<std::pair<ItemId, ItemId>> pairs_;
};

class SingularInformationError : public std::runtime_error {
 public:
  SingularInformationError(const std::string& what, Eigen::VectorXd null_direction)
      : std::runtime_error(what), null_direction_(std::move(null_direction)) {}
  /// Eigenvector of the smallest eigenvalue, in reduced coordinates.
  const Eigen::VectorXd& null_direction() const { return null_direction_; }

 private:
  Eigen::VectorXd null_direction_;
};

/// Observed Fisher information per sample: the reduced-coordinate Hessian
/// of the negative log-likelihood divided by N. Throws
/// SingularInformationError if it is not positive definite.
Eigen::MatrixXd fisher_information(const ComparisonDataset& d, LinkModel m, const Theta& theta_hat);

/// Variances from the inverse information. The last item's score variance
/// is the quadratic form of the inverse with (0, 1, ..., 1).
VarianceEstimates variance_estimates(const Eigen::MatrixXd& info);

/// sqrt(4 ln(n + 1) delta_hat) / sqrt(N).
double compute_delta(double delta_hat, std::size_t n, std::size_t N);

/// All pairs {i, j} with |s_i - s_j| <= lambda. Negative lambda is clamped to 0.
PairSet incomparable_set(const Eigen::VectorXd& scores, double lambda);

ThresholdBounds threshold_bounds(double lambda_hat, double Delta);
ThresholdBounds threshold_bounds(const FitResult& fit, const VarianceEstimates& var,
                                 const ComparisonDataset& d);

struct InferenceReport {
  VarianceEstimates variances;
  ThresholdBounds bounds;
};

/// Fisher information, variances and threshold bounds for a finished fit.
InferenceReport infer(const ComparisonDataset& d, LinkModel m, const FitResult& fit);

}  // namespace porank
