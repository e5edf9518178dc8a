#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

namespace porank {

/// Raised for malformed or inconsistent comparison data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ItemId = std::size_t;

/// Bijective map between external item names and dense 0-based ids.
class ItemRegistry {
 public:
  ItemRegistry() = default;
  explicit ItemRegistry(std::vector<std::string> names);

  /// Returns the id of `name`, assigning the next free id on first sight.
  ItemId intern(std::string_view name);
  std::optional<ItemId> find(std::string_view name) const;

  const std::string& name(ItemId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  /// Registry with names "0", "1", ... used when data has no external names.
  static ItemRegistry numbered(std::size_t n);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId> index_;
};

/// One observation (i, j, y): y = +1 means left beat right, -1 the
/// opposite, 0 an abstention ("too close to call").
struct Comparison {
  ItemId left = 0;
  ItemId right = 0;
  int label = 0;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

inline bool is_valid_label(int y) { return y == -1 || y == 0 || y == 1; }

struct LabelCounts {
  std::size_t losses = 0;  // y = -1
  std::size_t ties = 0;    // y = 0
  std::size_t wins = 0;    // y = +1

  std::size_t total() const { return losses + ties + wins; }
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Immutable set of items plus the ordered list of labelled pairs.
class ComparisonDataset {
 public:
  /// Throws DataError on an empty comparison list, out-of-range ids,
  /// self-comparisons or labels outside {-1, 0, 1}.
  ComparisonDataset(ItemRegistry items, std::vector<Comparison> comparisons);
  ComparisonDataset(std::size_t n, std::vector<Comparison> comparisons);

  std::size_t num_items() const { return items_.size(); }
  std::size_t num_comparisons() const { return comparisons_.size(); }
  const std::vector<Comparison>& comparisons() const { return comparisons_; }
  const ItemRegistry& items() const { return items_; }

  friend bool operator==(const ComparisonDataset& a, const ComparisonDataset& b) {
    return a.items_.names() == b.items_.names() && a.comparisons_ == b.comparisons_;
  }

 private:
  ItemRegistry items_;
  std::vector<Comparison> comparisons_;
};

/// Header names used when reading a comparison CSV.
struct CsvSchema {
  std::string left = "left";
  std::string right = "right";
  std::string label = "label";
  std::string user = "user";  // optional; accepted and ignored
};

ComparisonDataset load_csv(const std::string& path, const CsvSchema& schema = {});
ComparisonDataset read_csv(std::istream& in, const CsvSchema& schema = {});
void write_csv(std::ostream& out, const ComparisonDataset& d);
void write_csv(const std::string& path, const ComparisonDataset& d);

/// Signed indicator e_right - e_left over n items.
Eigen::SparseVector<double> design_row(const Comparison& c, std::size_t n);

LabelCounts label_counts(const ComparisonDataset& d);

/// Connected components of the comparison graph, each sorted by id, ordered
/// by their smallest member.
std::vector<std::vector<ItemId>> connected_components(const ComparisonDataset& d);

}  // namespace porank
