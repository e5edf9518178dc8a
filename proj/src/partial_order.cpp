#include "porank/partial_order.hpp"

#include <algorithm>
#include <sstream>

namespace porank {

PartialOrder::PartialOrder(std::size_t n) : n_(n), rel_(n * n, 0) {}

PartialOrder::PartialOrder(std::size_t n, const std::vector<std::pair<ItemId, ItemId>>& pairs)
    : PartialOrder(n) {
  for (const auto& [i, j] : pairs) add(i, j);
}

std::size_t PartialOrder::index(ItemId i, ItemId j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("PartialOrder: item id out of range");
  return i * n_ + j;
}

void PartialOrder::add(ItemId i, ItemId j) { rel_[index(i, j)] = 1; }

std::size_t PartialOrder::size() const {
  return static_cast<std::size_t>(std::count(rel_.begin(), rel_.end(), char{1}));
}

std::vector<std::pair<ItemId, ItemId>> PartialOrder::pairs() const {
  std::vector<std::pair<ItemId, ItemId>> out;
  for (ItemId i = 0; i < n_; ++i)
    for (ItemId j = 0; j < n_; ++j)
      if (rel_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

PartialOrder lambda_cut(const Eigen::VectorXd& scores, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda_cut: lambda must be >= 0");
  const auto n = static_cast<std::size_t>(scores.size());
  PartialOrder p(n);
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = 0; j < n; ++j)
      if (scores(static_cast<Eigen::Index>(i)) - scores(static_cast<Eigen::Index>(j)) > lambda)
        p.add(i, j);
  return p;
}

AxiomReport check_axioms(const PartialOrder& p) {
  AxiomReport r;
  const std::size_t n = p.num_items();
  for (ItemId i = 0; i < n; ++i) {
    if (p.precedes(i, i)) r.irreflexive = false;
    for (ItemId j = 0; j < n; ++j) {
      if (!p.precedes(i, j)) continue;
      if (i != j && p.precedes(j, i)) r.asymmetric = false;
      for (ItemId k = 0; k < n && r.transitive; ++k)
        if (p.precedes(j, k) && !p.precedes(i, k)) r.transitive = false;
    }
  }
  return r;
}

PartialOrder transitive_closure(const PartialOrder& p) {
  PartialOrder c = p;
  const std::size_t n = p.num_items();
  for (ItemId k = 0; k < n; ++k)
    for (ItemId i = 0; i < n; ++i) {
      if (!c.precedes(i, k)) continue;
      for (ItemId j = 0; j < n; ++j)
        if (c.precedes(k, j)) c.add(i, j);
    }
  return c;
}

PartialOrder transitive_reduction(const PartialOrder& p) {
  const PartialOrder c = transitive_closure(p);
  const std::size_t n = p.num_items();
  PartialOrder r(n);
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = 0; j < n; ++j) {
      if (i == j || !c.precedes(i, j)) continue;
      bool implied = false;
      for (ItemId k = 0; k < n && !implied; ++k)
        implied = k != i && k != j && c.precedes(i, k) && c.precedes(k, j);
      if (!implied) r.add(i, j);
    }
  return r;
}

LevelDecomposition level_decomposition(const PartialOrder& p,
                                       const std::optional<Eigen::VectorXd>& scores) {
  const std::size_t n = p.num_items();
  if (scores && static_cast<std::size_t>(scores->size()) != n)
    throw std::invalid_argument("level_decomposition: score vector size mismatch");

  // Longest-chain height via Kahn's algorithm: an item's level is fixed once
  // all of its predecessors have been placed.
  std::vector<std::size_t> pending(n, 0);
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = 0; j < n; ++j)
      if (p.precedes(i, j)) ++pending[j];

  LevelDecomposition out;
  out.level_of.assign(n, 0);
  std::vector<ItemId> frontier;
  for (ItemId i = 0; i < n; ++i)
    if (pending[i] == 0) frontier.push_back(i);
  std::size_t placed = 0;
  while (!frontier.empty()) {
    placed += frontier.size();
    std::vector<ItemId> next;
    for (const ItemId i : frontier)
      for (ItemId j = 0; j < n; ++j)
        if (p.precedes(i, j)) {
          out.level_of[j] = std::max(out.level_of[j], out.level_of[i] + 1);
          if (--pending[j] == 0) next.push_back(j);
        }
    frontier = std::move(next);
  }
  if (placed != n) throw CycleError("relation contains a cycle; levels are undefined");

  std::size_t depth = 0;
  for (const auto l : out.level_of) depth = std::max(depth, l + 1);
  out.levels.assign(n == 0 ? 0 : depth, {});
  for (ItemId i = 0; i < n; ++i) out.levels[out.level_of[i]].push_back(i);
  if (scores) {
    for (auto& group : out.levels)
      std::stable_sort(group.begin(), group.end(), [&](ItemId a, ItemId b) {
        return (*scores)(static_cast<Eigen::Index>(a)) > (*scores)(static_cast<Eigen::Index>(b));
      });
  }
  return out;
}

AlphaCut empirical_alpha_cut(const ComparisonDataset& d, double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0.5, 1]");
  const auto n = static_cast<Eigen::Index>(d.num_items());
  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : d.comparisons()) {
    const auto i = static_cast<Eigen::Index>(c.left);
    const auto j = static_cast<Eigen::Index>(c.right);
    if (c.label == 1) wins(i, j) += 1.0;
    if (c.label == -1) wins(j, i) += 1.0;
  }
  AlphaCut out;
  out.relation = PartialOrder(d.num_items());
  out.win_probability = Eigen::MatrixXd::Constant(n, n, 0.5);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double decisive = wins(i, j) + wins(j, i);
      if (decisive > 0.0) out.win_probability(i, j) = wins(i, j) / decisive;
      if (out.win_probability(i, j) >= alpha)
        out.relation.add(static_cast<ItemId>(i), static_cast<ItemId>(j));
    }
  out.axioms = check_axioms(out.relation);
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

}  // namespace

std::string export_dot(const PartialOrder& p, const LevelDecomposition& levels,
                       const ItemRegistry& names) {
  const std::size_t n = p.num_items();
  if (names.size() != n) throw std::invalid_argument("export_dot: name registry size mismatch");
  std::ostringstream os;
  os << "digraph partial_order {\n  rankdir=TB;\n  node [shape=box];\n";
  for (ItemId i = 0; i < n; ++i)
    os << "  n" << i << " [label=\"" << dot_escape(names.name(i)) << "\"];\n";
  for (const auto& group : levels.levels) {
    os << "  { rank=same;";
    for (const ItemId i : group) os << " n" << i << ';';
    os << " }\n";
  }
  for (const auto& [i, j] : transitive_reduction(p).pairs())
    os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace porank
