#include <doctest.h>

#include <sstream>

#include "porank/comparisons.hpp"
#include "support.hpp"

using namespace porank;

namespace {

ComparisonDataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

std::vector<int> labels(const ComparisonDataset& d) {
  std::vector<int> out;
  for (const auto& c : d.comparisons()) out.push_back(c.label);
  return out;
}

}  // namespace

TEST_CASE("csv: basic parse") {
  const auto d = parse("left,right,label\nA,B,1\nB,C,0\n");
  CHECK(d.num_items() == 3);
  CHECK(d.num_comparisons() == 2);
  CHECK(labels(d) == std::vector<int>{1, 0});
  CHECK(d.items().names() == std::vector<std::string>{"A", "B", "C"});
  CHECK(d.comparisons()[1] == Comparison{1, 2, 0});
}

TEST_CASE("csv: columns in any order, user column ignored, whitespace and blank lines") {
  const auto d = parse("\xEF\xBB\xBFuser,label,right,left\nu1, -1 ,B,A\n\nu2,0,C,B\n");
  CHECK(d.num_comparisons() == 2);
  CHECK(d.comparisons()[0] == Comparison{0, 1, -1});
  CHECK(d.items().name(2) == "C");
}

TEST_CASE("csv: errors") {
  CHECK(error_of("left,right,label\nA,A,1\n") == "self-comparison at row 1");
  CHECK(error_of("left,right,label\nA,B,2\n").find("label must be -1, 0, or 1") == 0);
  CHECK(error_of("left,right,label\nA,B,x\n").find("label must be -1, 0, or 1") == 0);
  CHECK(error_of("left,right,label\nA,B,1\nC,D\n").find("malformed row 2") == 0);
  CHECK(error_of("").find("empty file") == 0);
  CHECK(error_of("left,right,label\n").find("empty file") == 0);
  CHECK(error_of("a,b,label\nA,B,1\n").find("missing column") != std::string::npos);
}

TEST_CASE("dataset invariants") {
  CHECK_THROWS_AS(ComparisonDataset(3, {}), DataError);
  CHECK_THROWS_AS(ComparisonDataset(2, {{0, 2, 1}}), DataError);
  CHECK_THROWS_AS(ComparisonDataset(2, {{1, 1, 1}}), DataError);
  CHECK_THROWS_AS(ComparisonDataset(2, {{0, 1, 3}}), DataError);
  CHECK_THROWS_AS(ItemRegistry({"a", "a"}), DataError);
}

TEST_CASE("design_row") {
  auto dense = [](const Comparison& c, std::size_t n) {
    return Eigen::VectorXd(design_row(c, n));
  };
  CHECK(dense({0, 2, 1}, 3) == Eigen::Vector3d(-1, 0, 1));
  CHECK(dense({2, 0, 1}, 3) == Eigen::Vector3d(1, 0, -1));
  CHECK(dense({1, 0, 1}, 2) == Eigen::Vector2d(1, -1));
  CHECK(design_row({0, 2, 1}, 3).nonZeros() == 2);
  CHECK_THROWS_AS(design_row({0, 3, 1}, 3), DataError);
}

TEST_CASE("label_counts") {
  const ComparisonDataset a(2, {{0, 1, 1}, {0, 1, 0}, {1, 0, -1}, {1, 0, 0}});
  CHECK(label_counts(a) == LabelCounts{1, 2, 1});
  const ComparisonDataset b(2, {{0, 1, 1}, {1, 0, 1}});
  CHECK(label_counts(b) == LabelCounts{0, 0, 2});
  CHECK(label_counts(b).total() == 2);
}

TEST_CASE("connected components") {
  const ComparisonDataset d(5, {{3, 4, 1}, {0, 1, 0}, {1, 0, 1}});
  const auto comps = connected_components(d);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<ItemId>{0, 1});
  CHECK(comps[1] == std::vector<ItemId>{2});
  CHECK(comps[2] == std::vector<ItemId>{3, 4});
}

TEST_CASE("property: write then read round trips") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(8);
    const auto d = testing::random_dataset(rng, n, 1 + rng.below(40), LinkModel::BradleyTerry);
    std::stringstream buf;
    write_csv(buf, d);
    const auto back = read_csv(buf);
    // Registry order follows first appearance, so compare by name.
    REQUIRE(back.num_comparisons() == d.num_comparisons());
    for (std::size_t k = 0; k < d.num_comparisons(); ++k) {
      const auto& a = d.comparisons()[k];
      const auto& b = back.comparisons()[k];
      CHECK(d.items().name(a.left) == back.items().name(b.left));
      CHECK(d.items().name(a.right) == back.items().name(b.right));
      CHECK(a.label == b.label);
    }
    CHECK(label_counts(back) == label_counts(d));
  }
}
