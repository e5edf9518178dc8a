#pragma once

#include <vector>

#include "porank/comparisons.hpp"
#include "porank/links.hpp"
#include "porank/simulate.hpp"

namespace porank::testing {

// Random dataset with scores ~ N(0, scale^2), labels drawn from model m.
inline ComparisonDataset random_dataset(Rng& rng, std::size_t n, std::size_t N, LinkModel m,
                                        double lambda = 1.0, double scale = 1.0) {
  std::vector<double> s(n);
  for (auto& v : s) v = scale * rng.normal();
  std::vector<Comparison> obs;
  obs.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto i = static_cast<ItemId>(rng.below(n));
    auto j = static_cast<ItemId>(rng.below(n - 1));
    if (j >= i) ++j;
    obs.push_back({i, j, draw_label(m, s[i] - s[j], lambda, rng)});
  }
  return ComparisonDataset(n, std::move(obs));
}

// Dataset from fixed true scores.
inline ComparisonDataset dataset_from_scores(Rng& rng, const std::vector<double>& s, std::size_t N,
                                             LinkModel m, double lambda) {
  const std::size_t n = s.size();
  std::vector<Comparison> obs;
  for (std::size_t k = 0; k < N; ++k) {
    const auto i = static_cast<ItemId>(rng.below(n));
    auto j = static_cast<ItemId>(rng.below(n - 1));
    if (j >= i) ++j;
    obs.push_back({i, j, draw_label(m, s[i] - s[j], lambda, rng)});
  }
  return ComparisonDataset(n, std::move(obs));
}

}  // namespace porank::testing
