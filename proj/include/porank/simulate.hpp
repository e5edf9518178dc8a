#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "porank/comparisons.hpp"
#include "porank/links.hpp"
#include "porank/pair_classes.hpp"

namespace porank {

/// Seedable generator with explicit stream splitting. Engine is
/// std::mt19937_64; variates are computed here, not by <random>
/// distributions.
///
/// Stream k of seed s is seeded with splitmix64(s ^ splitmix64(k + 1)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Box-Muller, cosine branch).
  double normal();
  /// Standard logistic.
  double logistic();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Draws the comparison noise of the given link: uniform on [-1, 1],
/// standard logistic, or standard normal.
double sample_noise(LinkModel m, Rng& rng);

/// Three-outcome label for score difference s_i - s_j: +1 if
/// diff + noise > lambda, -1 if below -lambda, else 0.
int draw_label(LinkModel m, double score_diff, double lambda, Rng& rng);

struct SimConfig {
  std::size_t n = 20;
  std::size_t N = 10000;
  double lambda_star = 1.0;
  double score_scale = 10.0;
  LinkModel model = LinkModel::BradleyTerry;
  std::uint64_t seed = 0;
  std::size_t replications = 1;

  /// Throws std::invalid_argument for n < 2, N < 1, lambda_star < 0,
  /// replications < 1 or a non-positive score scale.
  void validate() const;
};

struct GroundTruth {
  Eigen::VectorXd scores_star;
  double lambda_star = 0.0;
};

struct SimulatedData {
  GroundTruth truth;
  ComparisonDataset data;
};

/// Scores ~ score_scale * N(0, 1); each sample picks an unordered pair
/// uniformly with replacement, a random orientation, then a label via
/// draw_label. Items are named "item0", "item1", ... Replication r uses
/// stream r of cfg.seed.
SimulatedData generate(const SimConfig& cfg, std::size_t replication = 0);

PairClasses ground_truth_classes(const GroundTruth& gt);

}  // namespace porank
