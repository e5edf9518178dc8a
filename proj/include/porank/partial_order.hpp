#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"

namespace porank {

/// Strict relation over n items stored as a dense adjacency matrix;
/// precedes(i, j) means i is ranked above j. Nothing here forces the
/// partial-order axioms; check_axioms() reports on them.
class PartialOrder {
 public:
  explicit PartialOrder(std::size_t n = 0);
  PartialOrder(std::size_t n, const std::vector<std::pair<ItemId, ItemId>>& pairs);

  void add(ItemId i, ItemId j);
  bool precedes(ItemId i, ItemId j) const { return rel_[index(i, j)] != 0; }
  bool comparable(ItemId i, ItemId j) const { return precedes(i, j) || precedes(j, i); }

  std::size_t num_items() const { return n_; }
  /// Number of ordered pairs in the relation.
  std::size_t size() const;
  /// Ordered pairs in lexicographic order.
  std::vector<std::pair<ItemId, ItemId>> pairs() const;

  friend bool operator==(const PartialOrder&, const PartialOrder&) = default;

 private:
  std::size_t index(ItemId i, ItemId j) const;

  std::size_t n_ = 0;
  std::vector<char> rel_;
};

struct AxiomReport {
  bool irreflexive = true;
  bool asymmetric = true;
  bool transitive = true;

  bool is_partial_order() const { return irreflexive && asymmetric && transitive; }
};

/// {i > j : s_i - s_j > lambda}. Throws std::invalid_argument for lambda < 0.
PartialOrder lambda_cut(const Eigen::VectorXd& scores, double lambda);

AxiomReport check_axioms(const PartialOrder& p);

PartialOrder transitive_closure(const PartialOrder& p);
/// Hasse edges: (i, j) survives unless some k has i > k > j in the closure.
PartialOrder transitive_reduction(const PartialOrder& p);

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Items grouped by longest-chain height; level 0 holds the maximal items.
struct LevelDecomposition {
  std::vector<std::vector<ItemId>> levels;
  std::vector<std::size_t> level_of;
};

/// Within a level, items are ordered by descending score then index (or
/// by index alone without scores). Throws CycleError on cyclic input.
LevelDecomposition level_decomposition(const PartialOrder& p,
                                       const std::optional<Eigen::VectorXd>& scores = std::nullopt);

/// Empirical baseline: i > j iff the share of decisive comparisons won by
/// i over j is at least alpha. Ties are ignored; undecided pairs count 0.5.
struct AlphaCut {
  PartialOrder relation;
  AxiomReport axioms;
  /// win_probability(i, j) = P(i, j).
  Eigen::MatrixXd win_probability;
};

/// Throws std::invalid_argument unless 0.5 < alpha <= 1.
AlphaCut empirical_alpha_cut(const ComparisonDataset& d, double alpha);

/// Graphviz digraph of the transitive reduction, one same-rank block per level.
std::string export_dot(const PartialOrder& p, const LevelDecomposition& levels,
                       const ItemRegistry& names);

}  // namespace porank
