#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"
#include "porank/links.hpp"

namespace porank {

/// Model parameters: tie margin lambda >= 0 and one score per item with
/// the scores summing to zero.
struct Theta {
  double lambda = 0.0;
  Eigen::VectorXd scores;

  std::size_t num_items() const { return static_cast<std::size_t>(scores.size()); }
};

/// Reduced coordinates (lambda, s_1, ..., s_{n-1}); the last score is
/// implied as minus the sum of the others. Length n.
using ReducedTheta = Eigen::VectorXd;

ReducedTheta reduce(const Theta& theta);
Theta expand(const ReducedTheta& reduced);
/// Shifts scores so they sum to zero. Leaves lambda untouched.
Theta center(Theta theta);

/// Linear predictors of one observation:
/// plus = lambda + s_right - s_left, minus = -lambda + s_right - s_left.
struct Zeta {
  double plus = 0.0;
  double minus = 0.0;
};

Zeta zeta(const Comparison& c, const Theta& theta);

/// Probability of outcome y in {-1, 0, 1} for the observation's predictors.
double outcome_probability(LinkModel m, int y, const Zeta& z);

/// Raised when the likelihood is zero (objective +inf) where a finite value
/// is required, e.g. for derivatives.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Negative log-likelihood summed over all observations. Returns +inf when
/// some observed outcome has probability zero. Throws std::invalid_argument
/// when theta does not match the dataset's item count.
double nll(const ComparisonDataset& d, LinkModel m, const Theta& theta);
double nll(const ComparisonDataset& d, LinkModel m, const ReducedTheta& reduced);

/// Exact gradient in reduced coordinates.
Eigen::VectorXd nll_grad(const ComparisonDataset& d, LinkModel m, const ReducedTheta& reduced);

/// Exact Hessian in reduced coordinates, assembled symmetrically.
Eigen::MatrixXd nll_hessian(const ComparisonDataset& d, LinkModel m,
                            const ReducedTheta& reduced);

/// Value, gradient and Hessian from a single pass over the data.
struct Objective {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hessian;
};

Objective evaluate_objective(const ComparisonDataset& d, LinkModel m,
                             const ReducedTheta& reduced);

struct SolverConfig {
  double tol = 1e-8;  ///< on the infinity norm of the gradient
  int max_iter = 200;
  double lambda_cap = 1e3;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_halvings = 60;
};

struct FitResult {
  Theta theta_hat;
  double nll = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// No tie labels: lambda pinned at 0 and only scores are fitted.
  bool lambda_fixed = false;
  /// Lambda hit SolverConfig::lambda_cap.
  bool lambda_capped = false;
  /// Objective value after each accepted step, starting with the initial point.
  std::vector<double> nll_trace;
  std::vector<std::string> diagnostics;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton's method with Armijo backtracking on the reduced parameters.
/// Throws FitError when no feasible starting point exists.
FitResult fit(const ComparisonDataset& d, LinkModel m, const SolverConfig& cfg = {});

}  // namespace porank
