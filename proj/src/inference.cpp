#include "porank/inference.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

namespace porank {

void PairSet::insert(ItemId i, ItemId j) {
  if (i == j) throw std::invalid_argument("PairSet: self-pair");
  pairs_.emplace(std::min(i, j), std::max(i, j));
}

bool PairSet::contains(ItemId i, ItemId j) const {
  return pairs_.count({std::min(i, j), std::max(i, j)}) > 0;
}

bool PairSet::is_subset_of(const PairSet& other) const {
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

Eigen::MatrixXd fisher_information(const ComparisonDataset& d, LinkModel m, const Theta& theta_hat) {
  Eigen::MatrixXd info =
      nll_hessian(d, m, reduce(theta_hat)) / static_cast<double>(d.num_comparisons());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  const double smallest = eig.eigenvalues()(0);
  const double largest = eig.eigenvalues()(info.rows() - 1);
  if (!(smallest > 1e-14 * std::max(1.0, largest)))
    throw SingularInformationError("Fisher information is singular (smallest eigenvalue " +
                                       std::to_string(smallest) + ")",
                                   eig.eigenvectors().col(0));
  return info;
}

VarianceEstimates variance_estimates(const Eigen::MatrixXd& info) {
  const Eigen::Index dim = info.rows();
  if (dim < 1 || info.cols() != dim) throw std::invalid_argument("information matrix must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success)
    throw SingularInformationError("information matrix is not invertible",
                                   Eigen::VectorXd::Zero(dim));
  const Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(dim, dim));

  VarianceEstimates v;
  v.sigma2_lambda = inverse(0, 0);
  v.sigma2_scores.resize(dim);
  for (Eigen::Index i = 1; i < dim; ++i) v.sigma2_scores(i - 1) = inverse(i, i);
  // The implied last score is -(s_1 + ... + s_{n-1}).
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(dim);
  ones(0) = 0.0;
  v.sigma2_scores(dim - 1) = ones.dot(llt.solve(ones));
  v.delta_hat = std::max(v.sigma2_lambda, v.sigma2_scores.maxCoeff());
  return v;
}

double compute_delta(double delta_hat, std::size_t n, std::size_t N) {
  if (delta_hat < 0.0) throw std::invalid_argument("delta_hat must be nonnegative");
  if (N < 1) throw std::invalid_argument("sample count must be positive");
  return std::sqrt(4.0 * std::log(static_cast<double>(n) + 1.0) * delta_hat) /
         std::sqrt(static_cast<double>(N));
}

PairSet incomparable_set(const Eigen::VectorXd& scores, double lambda) {
  if (lambda < 0.0) {
    spdlog::warn("negative threshold {} clamped to 0", lambda);
    lambda = 0.0;
  }
  PairSet out;
  const auto n = static_cast<ItemId>(scores.size());
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = i + 1; j < n; ++j)
      if (std::abs(scores(static_cast<Eigen::Index>(i)) - scores(static_cast<Eigen::Index>(j))) <=
          lambda)
        out.insert(i, j);
  return out;
}

ThresholdBounds threshold_bounds(double lambda_hat, double Delta) {
  ThresholdBounds b;
  b.lambda_hat = lambda_hat;
  b.Delta = Delta;
  b.lambda_lower = std::max(0.0, lambda_hat - 3.0 * Delta);
  b.lambda_upper = lambda_hat + 3.0 * Delta;
  return b;
}

ThresholdBounds threshold_bounds(const FitResult& fit, const VarianceEstimates& var,
                                 const ComparisonDataset& d) {
  if (!fit.converged) spdlog::warn("threshold bounds computed from a fit that did not converge");
  return threshold_bounds(fit.theta_hat.lambda,
                          compute_delta(var.delta_hat, d.num_items(), d.num_comparisons()));
}

InferenceReport infer(const ComparisonDataset& d, LinkModel m, const FitResult& fit) {
  InferenceReport r;
  r.variances = variance_estimates(fisher_information(d, m, fit.theta_hat));
  r.bounds = threshold_bounds(fit, r.variances, d);
  return r;
}

}  // namespace porank
