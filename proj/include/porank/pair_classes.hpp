#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"

namespace porank {

/// Three-way class of an unordered pair {i, j} with i < j.
enum class PairClass { FirstAbove, SecondAbove, Tie };

/// One class per unordered pair, pairs enumerated as (0,1), (0,2), ...,
/// (1,2), ... (lexicographic with i < j).
struct PairClasses {
  std::size_t n = 0;
  std::vector<PairClass> classes;

  PairClass at(ItemId i, ItemId j) const;
};

std::size_t num_pairs(std::size_t n);
std::vector<std::pair<ItemId, ItemId>> all_pairs(std::size_t n);

/// Tie iff |s_i - s_j| <= lambda, otherwise oriented towards the larger score.
PairClasses classify_pairs(const Eigen::VectorXd& scores, double lambda);

}  // namespace porank
