#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "porank/pair_classes.hpp"
#include "porank/simulate.hpp"

using namespace porank;

TEST_CASE("Bradley-Terry outcome frequencies at zero score gap") {
  // Closed form: sigma(-1), sigma(1) - sigma(-1), sigma(-1).
  const double edge = 1.0 / (1.0 + std::exp(1.0));
  const std::array<double, 3> expected = {edge, 1.0 - 2.0 * edge, edge};  // y = 1, 0, -1
  CHECK(expected[0] == doctest::Approx(0.268941).epsilon(1e-5));
  CHECK(expected[1] == doctest::Approx(0.462117).epsilon(1e-5));

  Rng rng = Rng::for_stream(1, 0);
  constexpr int kDraws = 1'000'000;
  std::array<double, 3> counts{};
  for (int k = 0; k < kDraws; ++k) counts[static_cast<std::size_t>(1 - draw_label(LinkModel::BradleyTerry, 0.0, 1.0, rng))] += 1.0;
  double chi2 = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(std::abs(counts[c] / kDraws - expected[c]) < 0.01);
    const double e = expected[c] * kDraws;
    chi2 += (counts[c] - e) * (counts[c] - e) / e;
  }
  // 99.9% quantile of chi-square with 2 degrees of freedom.
  CHECK(chi2 < 13.8155);
}

TEST_CASE("draw_label limits") {
  Rng rng(4);
  for (auto m : kAllLinks)
    for (int k = 0; k < 10000; ++k) {
      CHECK(draw_label(m, 0.3, 0.0, rng) != 0);
      CHECK(draw_label(m, 60.0, 1.0, rng) == 1);
      CHECK(draw_label(m, -60.0, 1.0, rng) == -1);
    }
}

TEST_CASE("noise distributions") {
  constexpr int kDraws = 200000;
  for (auto m : kAllLinks) {
    Rng rng = Rng::for_stream(9, static_cast<std::uint64_t>(m));
    std::vector<double> xs(kDraws);
    double mean = 0.0, var = 0.0;
    for (auto& x : xs) {
      x = sample_noise(m, rng);
      mean += x;
    }
    mean /= kDraws;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= kDraws - 1;
    const double target = m == LinkModel::Uniform        ? 1.0 / 3.0
                          : m == LinkModel::BradleyTerry ? std::numbers::pi * std::numbers::pi / 3.0
                                                         : 1.0;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(target).epsilon(0.02));
    for (double t : {-1.5, -0.7, 0.0, 0.4, 1.2}) {
      const double frac =
          static_cast<double>(std::count_if(xs.begin(), xs.end(), [t](double x) { return x <= t; })) / kDraws;
      CHECK(std::abs(frac - cdf(m, t)) < 0.005);
    }
  }
}

TEST_CASE("rng primitives") {
  Rng rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.below(7) < 7);
  }
  CHECK(splitmix64(0) != splitmix64(1));
  Rng a = Rng::for_stream(5, 2), b = Rng::for_stream(5, 2), c = Rng::for_stream(5, 3);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("generate") {
  SimConfig cfg;
  cfg.n = 7;
  cfg.N = 3000;
  cfg.seed = 7;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  CHECK(a.data == b.data);
  CHECK(a.truth.scores_star == b.truth.scores_star);
  CHECK(a.data.num_items() == 7);
  CHECK(a.data.num_comparisons() == 3000);
  CHECK(a.data.items().name(0) == "item0");
  CHECK_FALSE(generate(cfg, 1).data == a.data);

  // Both orientations occur.
  std::size_t forward = 0;
  for (const auto& c : a.data.comparisons()) forward += c.left < c.right;
  CHECK(forward > 1300);
  CHECK(forward < 1700);

  cfg.lambda_star = 0.0;
  for (auto m : kAllLinks) {
    cfg.model = m;
    const auto sim = generate(cfg);
    for (const auto& c : sim.data.comparisons()) CHECK(c.label != 0);
  }

  SimConfig bad;
  bad.n = 1;
  CHECK_THROWS(bad.validate());
  bad = SimConfig{};
  bad.lambda_star = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("ground truth classes") {
  GroundTruth gt;
  gt.scores_star = Eigen::Vector3d(3, 1, 0);
  gt.lambda_star = 1.5;
  auto cls = ground_truth_classes(gt);
  CHECK(cls.at(0, 1) == PairClass::FirstAbove);
  CHECK(cls.at(0, 2) == PairClass::FirstAbove);
  CHECK(cls.at(1, 2) == PairClass::Tie);

  gt.scores_star = Eigen::Vector3d(0, 1, 2);
  gt.lambda_star = 0.0;
  cls = ground_truth_classes(gt);
  CHECK(std::count(cls.classes.begin(), cls.classes.end(), PairClass::Tie) == 0);
  CHECK(cls.at(0, 1) == PairClass::SecondAbove);

  gt.scores_star = Eigen::Vector3d(1, 1, 1);
  cls = ground_truth_classes(gt);
  CHECK(std::count(cls.classes.begin(), cls.classes.end(), PairClass::Tie) == 3);
}
