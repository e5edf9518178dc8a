#include "porank/comparisons.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace porank {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::optional<int> parse_label(std::string_view s) {
  if (s == "1" || s == "+1") return 1;
  if (s == "0") return 0;
  if (s == "-1") return -1;
  return std::nullopt;
}

std::size_t column_of(const std::vector<std::string_view>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column '" + name + "' in header");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

ItemRegistry::ItemRegistry(std::vector<std::string> names) {
  for (auto& name : names) {
    if (find(name)) throw DataError("duplicate item name '" + name + "'");
    intern(name);
  }
}

ItemId ItemRegistry::intern(std::string_view name) {
  std::string key(name);
  if (const auto it = index_.find(key); it != index_.end()) return it->second;
  const ItemId id = names_.size();
  index_.emplace(key, id);
  names_.push_back(std::move(key));
  return id;
}

std::optional<ItemId> ItemRegistry::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ItemRegistry ItemRegistry::numbered(std::size_t n) {
  ItemRegistry r;
  for (std::size_t i = 0; i < n; ++i) r.intern(std::to_string(i));
  return r;
}

ComparisonDataset::ComparisonDataset(ItemRegistry items, std::vector<Comparison> comparisons)
    : items_(std::move(items)), comparisons_(std::move(comparisons)) {
  if (comparisons_.empty()) throw DataError("dataset must contain at least one comparison");
  const std::size_t n = items_.size();
  for (std::size_t k = 0; k < comparisons_.size(); ++k) {
    const auto& c = comparisons_[k];
    if (c.left >= n || c.right >= n)
      throw DataError("item id out of range in comparison " + std::to_string(k));
    if (c.left == c.right) throw DataError("self-comparison in comparison " + std::to_string(k));
    if (!is_valid_label(c.label)) throw DataError("label must be -1, 0, or 1");
  }
}

ComparisonDataset::ComparisonDataset(std::size_t n, std::vector<Comparison> comparisons)
    : ComparisonDataset(ItemRegistry::numbered(n), std::move(comparisons)) {}

ComparisonDataset read_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw DataError("empty file");
  // Tolerate a UTF-8 byte-order mark.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const std::string header_line = line;
  const auto header = split_fields(header_line);
  const std::size_t left_col = column_of(header, schema.left);
  const std::size_t right_col = column_of(header, schema.right);
  const std::size_t label_col = column_of(header, schema.label);

  ItemRegistry items;
  std::vector<Comparison> comparisons;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw DataError("malformed row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    const auto left = fields[left_col];
    const auto right = fields[right_col];
    if (left.empty() || right.empty())
      throw DataError("malformed row " + std::to_string(row) + ": empty item name");
    if (left == right) throw DataError("self-comparison at row " + std::to_string(row));
    const auto label = parse_label(fields[label_col]);
    if (!label)
      throw DataError("label must be -1, 0, or 1 (row " + std::to_string(row) + ": '" +
                      std::string(fields[label_col]) + "')");
    const ItemId i = items.intern(left);
    const ItemId j = items.intern(right);
    comparisons.push_back({i, j, *label});
  }
  if (comparisons.empty()) throw DataError("empty file: no comparison rows");
  return ComparisonDataset(std::move(items), std::move(comparisons));
}

ComparisonDataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const ComparisonDataset& d) {
  out << "left,right,label\n";
  for (const auto& c : d.comparisons())
    out << d.items().name(c.left) << ',' << d.items().name(c.right) << ',' << c.label << '\n';
}

void write_csv(const std::string& path, const ComparisonDataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(out, d);
}

Eigen::SparseVector<double> design_row(const Comparison& c, std::size_t n) {
  if (c.left >= n || c.right >= n) throw DataError("design_row: item index out of range");
  if (c.left == c.right) throw DataError("design_row: self-comparison");
  Eigen::SparseVector<double> x(static_cast<Eigen::Index>(n));
  x.insert(static_cast<Eigen::Index>(c.right)) = 1.0;
  x.insert(static_cast<Eigen::Index>(c.left)) = -1.0;
  return x;
}

LabelCounts label_counts(const ComparisonDataset& d) {
  LabelCounts counts;
  for (const auto& c : d.comparisons()) {
    switch (c.label) {
      case -1: ++counts.losses; break;
      case 0: ++counts.ties; break;
      default: ++counts.wins; break;
    }
  }
  return counts;
}

std::vector<std::vector<ItemId>> connected_components(const ComparisonDataset& d) {
  const std::size_t n = d.num_items();
  std::vector<ItemId> parent(n);
  std::iota(parent.begin(), parent.end(), ItemId{0});
  auto root = [&](ItemId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : d.comparisons()) {
    const auto a = root(c.left);
    const auto b = root(c.right);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<ItemId>> groups(n);
  for (ItemId i = 0; i < n; ++i) groups[root(i)].push_back(i);
  std::vector<std::vector<ItemId>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

}  // namespace porank
