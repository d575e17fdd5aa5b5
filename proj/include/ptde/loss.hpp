#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ptde {

/// Terms of the MIL ranking objective for one (positive, negative) bag pair.
/// `smoothness` and `sparsity` hold the lambda-weighted contributions, so
/// total == hinge + smoothness + sparsity.
struct LossBreakdown {
  double hinge = 0.0;
  double smoothness = 0.0;
  double sparsity = 0.0;
  double total = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct BagPairScores {
  std::vector<double> positive;
  std::vector<double> negative;
};

/// Index of the maximum; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

/// hinge = max(0, 1 - max(pos) + max(neg))
/// smoothness = lambda1 * sum_i (pos[i] - pos[i+1])^2
/// sparsity = lambda2 * sum_i pos[i]
/// The regularizers only see the positive bag.
LossBreakdown mil_ranking_loss(std::span<const double> pos_scores,
                               std::span<const double> neg_scores, double lambda1,
                               double lambda2);

/// max(pos) > max(neg), strictly.
bool ranking_satisfied(std::span<const double> pos_scores, std::span<const double> neg_scores);

/// Mean of per-pair totals.
double batch_objective(std::span<const BagPairScores> pairs, double lambda1, double lambda2);

}  // namespace ptde
