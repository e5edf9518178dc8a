#include "porank/pair_classes.hpp"

#include <cmath>
#include <stdexcept>

namespace porank {

std::size_t num_pairs(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::vector<std::pair<ItemId, ItemId>> all_pairs(std::size_t n) {
  std::vector<std::pair<ItemId, ItemId>> out;
  out.reserve(num_pairs(n));
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

PairClass PairClasses::at(ItemId i, ItemId j) const {
  if (i >= j || j >= n) throw std::out_of_range("PairClasses::at expects i < j < n");
  // Offset of row i in the lexicographic enumeration.
  const std::size_t row = i * n - i * (i + 1) / 2;
  return classes.at(row + (j - i - 1));
}

PairClasses classify_pairs(const Eigen::VectorXd& scores, double lambda) {
  PairClasses out;
  out.n = static_cast<std::size_t>(scores.size());
  out.classes.reserve(num_pairs(out.n));
  for (const auto& [i, j] : all_pairs(out.n)) {
    const double diff =
        scores(static_cast<Eigen::Index>(i)) - scores(static_cast<Eigen::Index>(j));
    if (std::abs(diff) <= lambda)
      out.classes.push_back(PairClass::Tie);
    else
      out.classes.push_back(diff > 0.0 ? PairClass::FirstAbove : PairClass::SecondAbove);
  }
  return out;
}

}  // namespace porank
