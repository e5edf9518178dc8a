#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"
#include "porank/links.hpp"

namespace porank::testing {

// Observation probability straight from c.d.f. differences; no log-domain
// tricks, so it is independent of the solver's likelihood code.
inline double naive_probability(LinkModel m, int y, double lambda, double diff) {
  const double zp = lambda - diff;
  const double zm = -lambda - diff;
  if (y == 1) return 1.0 - cdf(m, zp);
  if (y == -1) return cdf(m, zm);
  return cdf(m, zp) - cdf(m, zm);
}

inline double naive_nll(const ComparisonDataset& d, LinkModel m, double lambda,
                        const Eigen::VectorXd& s) {
  double total = 0.0;
  for (const auto& c : d.comparisons()) {
    const double p = naive_probability(m, c.label, lambda, s(c.left) - s(c.right));
    if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
    total -= std::log(p);
  }
  return total;
}

template <class F>
Eigen::VectorXd central_gradient(F f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd a = x, b = x;
    a(k) += h;
    b(k) -= h;
    g(k) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

template <class G>
Eigen::MatrixXd central_jacobian(G grad, const Eigen::VectorXd& x, double h) {
  Eigen::MatrixXd J(x.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd a = x, b = x;
    a(k) += h;
    b(k) -= h;
    J.col(k) = (grad(a) - grad(b)) / (2.0 * h);
  }
  return J;
}

struct GridOptimum {
  double value = std::numeric_limits<double>::infinity();
  double lambda = 0.0, s1 = 0.0, s2 = 0.0;
  bool on_boundary = false;  // lambda = 3 or a score at +-3
};

// Exhaustive search over lambda in [0,3], s1, s2 in [-3,3] at step 0.01 for
// a three-item dataset, with s3 = -s1 - s2. Every score difference is a
// multiple of the step, so each lambda gets a lookup table of term costs.
inline GridOptimum grid_search_n3(const ComparisonDataset& d, LinkModel m) {
  constexpr int kS = 300;  // s in [-3, 3] -> index -300..300
  constexpr int kL = 300;  // lambda in [0, 3]
  constexpr int kD = 3 * kS;
  constexpr double h = 0.01;
  // counts[(l, r)][y + 1]
  std::map<std::pair<ItemId, ItemId>, std::array<double, 3>> counts;
  for (const auto& c : d.comparisons()) counts[{c.left, c.right}][c.label + 1] += 1.0;

  std::vector<std::pair<ItemId, ItemId>> ends;
  for (const auto& entry : counts) ends.push_back(entry.first);
  GridOptimum best;
  std::vector<std::array<double, 3>> table(2 * kD + 1);
  std::vector<std::vector<double>> cost(counts.size(), std::vector<double>(2 * kD + 1));
  for (int li = 0; li <= kL; ++li) {
    const double lambda = li * h;
    for (int di = -kD; di <= kD; ++di)
      for (int y = -1; y <= 1; ++y) {
        const double p = naive_probability(m, y, lambda, di * h);
        table[di + kD][y + 1] = p > 0.0 ? -std::log(p) : std::numeric_limits<double>::infinity();
      }
    // Fold the label counts of each ordered pair into one cost per difference.
    std::size_t k = 0;
    for (const auto& [pair, w] : counts) {
      for (int di = 0; di <= 2 * kD; ++di) {
        double c = 0.0;
        for (int y = 0; y < 3; ++y)
          if (w[y] > 0.0) c += w[y] * table[di][y];
        cost[k][di] = c;
      }
      ++k;
    }
    for (int a = -kS; a <= kS; ++a) {
      for (int b = -kS; b <= kS; ++b) {
        const int s[3] = {a, b, -a - b};
        double total = 0.0;
        for (std::size_t q = 0; q < ends.size(); ++q)
          total += cost[q][s[ends[q].first] - s[ends[q].second] + kD];
        if (total < best.value) {
          best.value = total;
          best.lambda = lambda;
          best.s1 = a * h;
          best.s2 = b * h;
          best.on_boundary = li == kL || std::abs(a) == kS || std::abs(b) == kS;
        }
      }
    }
  }
  return best;
}

}  // namespace porank::testing
