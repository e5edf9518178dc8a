#include "porank/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <tuple>

#include <spdlog/spdlog.h>

namespace porank {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 - e^x) for x <= 0.
double log1mexp(double x) {
  if (x > -std::numbers::ln2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// log(Phi(hi) - Phi(lo)) for lo < hi, evaluated on the tail side that
// avoids cancellation.
double log_interval_mass(LinkModel m, double lo, double hi) {
  if (!(lo < hi)) return -kInf;
  if (hi <= 0.0) {
    const double a = log_cdf(m, hi);
    if (a == -kInf) return -kInf;
    return a + log1mexp(log_cdf(m, lo) - a);
  }
  if (lo >= 0.0) {
    const double a = log_cdf(m, -lo);
    if (a == -kInf) return -kInf;
    return a + log1mexp(log_cdf(m, -hi) - a);
  }
  const double mass = cdf(m, hi) - cdf(m, lo);
  return mass > 0.0 ? std::log(mass) : -kInf;
}

// One observation's contribution f(zeta+, zeta-) and its partial derivatives.
struct TermDerivs {
  double value = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  double d_pp = 0.0;
  double d_mm = 0.0;
  double d_pm = 0.0;
};

template <bool kDerivs>
TermDerivs term(LinkModel m, int y, const Zeta& z) {
  TermDerivs t;
  if (y == 1) {
    // P = 1 - Phi(zeta+) = Phi(-zeta+); all three links are symmetric.
    const double log_p = log_cdf(m, -z.plus);
    t.value = -log_p;
    if constexpr (kDerivs) {
      if (log_p == -kInf) return t;
      const double h = std::exp(log_pdf(m, z.plus) - log_p);
      t.d_plus = h;
      t.d_pp = pdf_log_slope(m, z.plus) * h + h * h;
    }
  } else if (y == -1) {
    const double log_p = log_cdf(m, z.minus);
    t.value = -log_p;
    if constexpr (kDerivs) {
      if (log_p == -kInf) return t;
      const double g = std::exp(log_pdf(m, z.minus) - log_p);
      t.d_minus = -g;
      t.d_mm = -pdf_log_slope(m, z.minus) * g + g * g;
    }
  } else {
    const double log_p = log_interval_mass(m, z.minus, z.plus);
    t.value = -log_p;
    if constexpr (kDerivs) {
      if (log_p == -kInf) return t;
      const double a = std::exp(log_pdf(m, z.plus) - log_p);
      const double b = std::exp(log_pdf(m, z.minus) - log_p);
      t.d_plus = -a;
      t.d_minus = b;
      t.d_pp = -pdf_log_slope(m, z.plus) * a + a * a;
      t.d_mm = pdf_log_slope(m, z.minus) * b + b * b;
      t.d_pm = -a * b;
    }
  }
  return t;
}

void check_dims(const ComparisonDataset& d, std::size_t n) {
  if (n != d.num_items())
    throw std::invalid_argument("parameter vector has " + std::to_string(n) +
                                " scores but the dataset has " +
                                std::to_string(d.num_items()) + " items");
}

// Observations grouped by (left, right, label) with multiplicities. Sorted
// keys fix the summation order independently of the input order.
struct WeightedTerm {
  Comparison obs;
  double count = 0.0;
};

std::vector<WeightedTerm> group_terms(const ComparisonDataset& d) {
  std::vector<Comparison> sorted = d.comparisons();
  std::sort(sorted.begin(), sorted.end(), [](const Comparison& a, const Comparison& b) {
    return std::tie(a.left, a.right, a.label) < std::tie(b.left, b.right, b.label);
  });
  std::vector<WeightedTerm> out;
  for (const auto& c : sorted) {
    if (!out.empty() && out.back().obs == c)
      out.back().count += 1.0;
    else
      out.push_back({c, 1.0});
  }
  return out;
}

double sum_terms(std::span<const WeightedTerm> terms, LinkModel m, const Theta& theta) {
  double total = 0.0;
  for (const auto& t : terms) {
    const double v = term<false>(m, t.obs.label, zeta(t.obs, theta)).value;
    if (!std::isfinite(v)) return kInf;
    total += t.count * v;
  }
  return total;
}

// Full coordinates are (lambda, s_0, ..., s_{n-1}); the reduced ones drop
// s_{n-1} = -sum(others). Maps the full gradient and upper
// triangle of the full Hessian to reduced coordinates.
Objective reduce_derivatives(double value, const Eigen::VectorXd& g_full,
                             const Eigen::MatrixXd& h_full) {
  const Eigen::Index dim = g_full.size() - 1;  // = n
  const Eigen::Index last = dim;               // full index of s_{n-1}
  Objective out;
  out.value = value;
  out.grad.resize(dim);
  out.grad(0) = g_full(0);
  for (Eigen::Index a = 1; a < dim; ++a) out.grad(a) = g_full(a) - g_full(last);

  // h_full holds the upper triangle only.
  auto h = [&](Eigen::Index a, Eigen::Index b) { return a <= b ? h_full(a, b) : h_full(b, a); };
  out.hessian.resize(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = a; b < dim; ++b) {
      double v = h(a, b);
      if (a >= 1) v -= h(last, b);
      if (b >= 1) v -= h(a, last);
      if (a >= 1 && b >= 1) v += h(last, last);
      out.hessian(a, b) = v;
      out.hessian(b, a) = v;
    }
  }
  return out;
}

Objective evaluate_full(std::span<const WeightedTerm> terms, LinkModel m, const Theta& theta) {
  const std::size_t n = theta.num_items();
  const Eigen::Index dim = static_cast<Eigen::Index>(n) + 1;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  double value = 0.0;
  for (const auto& wt : terms) {
    const Comparison& c = wt.obs;
    TermDerivs t = term<true>(m, c.label, zeta(c, theta));
    if (!std::isfinite(t.value))
      throw InfeasibleError("objective is infinite at this parameter (an observed outcome has "
                            "probability zero)");
    value += wt.count * t.value;
    for (double* v : {&t.d_plus, &t.d_minus, &t.d_pp, &t.d_mm, &t.d_pm}) *v *= wt.count;
    // u+ = e_lambda + w and u- = -e_lambda + w with w = e_right - e_left.
    const Eigen::Index jr = static_cast<Eigen::Index>(c.right) + 1;
    const Eigen::Index il = static_cast<Eigen::Index>(c.left) + 1;
    const double gw = t.d_plus + t.d_minus;
    g(0) += t.d_plus - t.d_minus;
    g(jr) += gw;
    g(il) -= gw;

    const double c_ll = t.d_pp + t.d_mm - 2.0 * t.d_pm;
    const double c_lw = t.d_pp - t.d_mm;
    const double c_ww = t.d_pp + t.d_mm + 2.0 * t.d_pm;
    h(0, 0) += c_ll;
    h(0, jr) += c_lw;
    h(0, il) -= c_lw;
    h(jr, jr) += c_ww;
    h(il, il) += c_ww;
    h(std::min(il, jr), std::max(il, jr)) -= c_ww;
  }
  return reduce_derivatives(value, g, h);
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Solves H p = -g by Cholesky, adding diagonal jitter if the factorization fails.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) return llt.solve(-g);
  const auto dim = static_cast<double>(h.rows());
  double jitter = 1e-10 * (1.0 + h.trace() / dim);
  for (int attempt = 0; attempt < 20; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd shifted = h;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) return llt.solve(-g);
  }
  return -g;
}

std::string describe_components(const std::vector<std::vector<ItemId>>& comps,
                                const ItemRegistry& items) {
  std::ostringstream os;
  os << "comparison graph is disconnected (" << comps.size() << " components):";
  for (const auto& comp : comps) {
    os << " {";
    for (std::size_t k = 0; k < comp.size(); ++k) os << (k ? "," : "") << items.name(comp[k]);
    os << '}';
  }
  return os.str();
}

}  // namespace

ReducedTheta reduce(const Theta& theta) {
  const auto n = theta.scores.size();
  if (n < 1) throw std::invalid_argument("theta must have at least one score");
  ReducedTheta r(n);
  r(0) = theta.lambda;
  r.tail(n - 1) = theta.scores.head(n - 1);
  return r;
}

Theta expand(const ReducedTheta& reduced) {
  const auto n = reduced.size();
  if (n < 1) throw std::invalid_argument("reduced theta must have at least one entry");
  Theta theta;
  theta.lambda = reduced(0);
  theta.scores.resize(n);
  theta.scores.head(n - 1) = reduced.tail(n - 1);
  theta.scores(n - 1) = -reduced.tail(n - 1).sum();
  return theta;
}

Theta center(Theta theta) {
  if (theta.scores.size() > 0) theta.scores.array() -= theta.scores.mean();
  return theta;
}

Zeta zeta(const Comparison& c, const Theta& theta) {
  const double diff = theta.scores(static_cast<Eigen::Index>(c.right)) -
                      theta.scores(static_cast<Eigen::Index>(c.left));
  return {theta.lambda + diff, -theta.lambda + diff};
}

double outcome_probability(LinkModel m, int y, const Zeta& z) {
  if (y == 1) return cdf(m, -z.plus);
  if (y == -1) return cdf(m, z.minus);
  return std::max(0.0, cdf(m, z.plus) - cdf(m, z.minus));
}

double nll(const ComparisonDataset& d, LinkModel m, const Theta& theta) {
  check_dims(d, theta.num_items());
  return sum_terms(group_terms(d), m, theta);
}

double nll(const ComparisonDataset& d, LinkModel m, const ReducedTheta& reduced) {
  return nll(d, m, expand(reduced));
}

Objective evaluate_objective(const ComparisonDataset& d, LinkModel m,
                             const ReducedTheta& reduced) {
  const Theta theta = expand(reduced);
  check_dims(d, theta.num_items());
  return evaluate_full(group_terms(d), m, theta);
}

Eigen::VectorXd nll_grad(const ComparisonDataset& d, LinkModel m, const ReducedTheta& reduced) {
  return evaluate_objective(d, m, reduced).grad;
}

Eigen::MatrixXd nll_hessian(const ComparisonDataset& d, LinkModel m,
                            const ReducedTheta& reduced) {
  return evaluate_objective(d, m, reduced).hessian;
}

FitResult fit(const ComparisonDataset& d, LinkModel m, const SolverConfig& cfg) {
  const std::size_t n = d.num_items();
  if (n < 2) throw FitError("at least two items are required");
  const auto dim = static_cast<Eigen::Index>(n);
  const LabelCounts counts = label_counts(d);

  FitResult result;
  if (const auto comps = connected_components(d); comps.size() > 1) {
    result.diagnostics.push_back(describe_components(comps, d.items()));
    spdlog::warn("{}", result.diagnostics.back());
  }

  ReducedTheta x = ReducedTheta::Zero(dim);
  // Uniform: decisive outcomes are feasible at s = 0 only for lambda < 1.
  x(0) = m == LinkModel::Uniform ? 0.5 : 1.0;

  if (counts.ties == counts.total()) {
    x(0) = cfg.lambda_cap;
    result.theta_hat = expand(x);
    result.nll = nll(d, m, x);
    result.grad_norm = inf_norm(nll_grad(d, m, x));
    result.nll_trace.push_back(result.nll);
    result.lambda_capped = true;
    result.diagnostics.push_back(
        "all labels are ties: lambda is unbounded above and was clamped to the lambda cap (" +
        std::to_string(cfg.lambda_cap) + ")");
    spdlog::warn("{}", result.diagnostics.back());
    return result;
  }

  Eigen::Index first_active = 0;
  if (counts.ties == 0) {
    x(0) = 0.0;
    first_active = 1;
    result.lambda_fixed = true;
    result.diagnostics.push_back("no tie labels: lambda fixed at 0, scores fitted alone");
  }

  const std::vector<WeightedTerm> terms = group_terms(d);
  auto objective = [&](const ReducedTheta& r) { return sum_terms(terms, m, expand(r)); };

  double f = objective(x);
  if (!std::isfinite(f))
    throw FitError("no feasible starting point: the objective is infinite at the initial "
                   "parameters");
  result.nll_trace.push_back(f);

  Objective obj = evaluate_full(terms, m, expand(x));
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const Eigen::Index k = dim - first_active;
    const Eigen::VectorXd g = obj.grad.tail(k);
    if (inf_norm(g) <= cfg.tol) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd p = newton_direction(obj.hessian.bottomRightCorner(k, k), g);
    if (!(g.dot(p) < 0.0)) p = -g;

    bool accepted = false;
    double step = 1.0;
    ReducedTheta candidate = x;
    double f_new = kInf;
    bool capped = false;
    for (int h = 0; h <= cfg.max_halvings; ++h, step *= cfg.backtrack) {
      candidate = x;
      candidate.tail(k) += step * p;
      capped = false;
      if (first_active == 0) {
        if (candidate(0) < 0.0) candidate(0) = 0.0;
        if (candidate(0) > cfg.lambda_cap) {
          candidate(0) = cfg.lambda_cap;
          capped = true;
        }
      }
      f_new = objective(candidate);
      if (!std::isfinite(f_new)) continue;
      const double decrease = g.dot((candidate - x).tail(k));
      if (f_new <= f + cfg.armijo * decrease) {
        accepted = true;
        break;
      }
      // Near the optimum the predicted decrease drops below the rounding
      // error of f and Armijo cannot tell steps apart; take the full Newton
      // step as long as f does not rise beyond that noise level.
      const double noise = 1e-12 * (1.0 + std::abs(f));
      if (h == 0 && -decrease <= noise && f_new <= f + noise) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.diagnostics.push_back("line search failed to find a sufficient decrease at iteration " +
                                   std::to_string(iter));
      break;
    }
    x = candidate;
    f = f_new;
    result.nll_trace.push_back(f);
    obj = evaluate_full(terms, m, expand(x));
    if (capped) {
      result.lambda_capped = true;
      first_active = 1;
      result.diagnostics.push_back("lambda reached the lambda cap (" +
                                   std::to_string(cfg.lambda_cap) + ") and was frozen");
      spdlog::warn("{}", result.diagnostics.back());
    }
  }

  result.iterations = iter;
  result.theta_hat = expand(x);
  result.nll = f;
  result.grad_norm = inf_norm(obj.grad.tail(dim - first_active));
  if (result.lambda_capped) result.converged = false;
  if (!result.converged && iter >= cfg.max_iter)
    result.diagnostics.push_back("maximum number of iterations reached");
  return result;
}

}  // namespace porank
