#include "porank/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace porank {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(seed ^ splitmix64(stream + 1)));
}

double Rng::uniform01() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::logistic() {
  const double u = uniform01();
  return std::log(u) - std::log1p(-u);
}

double sample_noise(LinkModel m, Rng& rng) {
  switch (m) {
    case LinkModel::Uniform: return 2.0 * rng.uniform01() - 1.0;
    case LinkModel::BradleyTerry: return rng.logistic();
    case LinkModel::ThurstoneMosteller: return rng.normal();
  }
  throw std::invalid_argument("unknown link model");
}

int draw_label(LinkModel m, double score_diff, double lambda, Rng& rng) {
  const double v = score_diff + sample_noise(m, rng);
  if (v > lambda) return 1;
  if (v < -lambda) return -1;
  return 0;
}

void SimConfig::validate() const {
  if (n < 2) throw std::invalid_argument("simulation needs n >= 2 items");
  if (N < 1) throw std::invalid_argument("simulation needs N >= 1 samples");
  if (!(lambda_star >= 0.0)) throw std::invalid_argument("lambda_star must be >= 0");
  if (!(score_scale > 0.0)) throw std::invalid_argument("score_scale must be positive");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
}

SimulatedData generate(const SimConfig& cfg, std::size_t replication) {
  cfg.validate();
  Rng rng = Rng::for_stream(cfg.seed, replication);

  GroundTruth truth;
  truth.lambda_star = cfg.lambda_star;
  truth.scores_star.resize(static_cast<Eigen::Index>(cfg.n));
  for (Eigen::Index i = 0; i < truth.scores_star.size(); ++i)
    truth.scores_star(i) = cfg.score_scale * rng.normal();

  const auto pairs = all_pairs(cfg.n);
  std::vector<Comparison> comparisons;
  comparisons.reserve(cfg.N);
  for (std::size_t k = 0; k < cfg.N; ++k) {
    auto [i, j] = pairs[rng.below(pairs.size())];
    if (rng.next_u64() >> 63) std::swap(i, j);
    const double diff = truth.scores_star(static_cast<Eigen::Index>(i)) -
                        truth.scores_star(static_cast<Eigen::Index>(j));
    comparisons.push_back({i, j, draw_label(cfg.model, diff, cfg.lambda_star, rng)});
  }

  ItemRegistry items;
  for (std::size_t i = 0; i < cfg.n; ++i) items.intern("item" + std::to_string(i));
  return {std::move(truth), ComparisonDataset(std::move(items), std::move(comparisons))};
}

PairClasses ground_truth_classes(const GroundTruth& gt) {
  return classify_pairs(gt.scores_star, gt.lambda_star);
}

}  // namespace porank
