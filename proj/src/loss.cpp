#include "ptde/loss.hpp"

#include <algorithm>

#include "ptde/error.hpp"

namespace ptde {

namespace {

void require_bags(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty()) throw Error(ErrorCode::EmptyBag, "positive bag has no segments");
  if (neg.empty()) throw Error(ErrorCode::EmptyBag, "negative bag has no segments");
}

}  // namespace

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

LossBreakdown mil_ranking_loss(std::span<const double> pos_scores,
                               std::span<const double> neg_scores, double lambda1,
                               double lambda2) {
  require_bags(pos_scores, neg_scores);
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw Error(ErrorCode::NegativeLambda, "regularization weights must be non-negative");
  }

  const double max_pos = pos_scores[argmax(pos_scores)];
  const double max_neg = neg_scores[argmax(neg_scores)];

  double smooth_raw = 0.0;
  for (std::size_t i = 0; i + 1 < pos_scores.size(); ++i) {
    const double d = pos_scores[i] - pos_scores[i + 1];
    smooth_raw += d * d;
  }
  double sparse_raw = 0.0;
  for (double s : pos_scores) sparse_raw += s;

  LossBreakdown out;
  out.lambda1 = lambda1;
  out.lambda2 = lambda2;
  out.hinge = std::max(0.0, 1.0 - max_pos + max_neg);
  out.smoothness = lambda1 * smooth_raw;
  out.sparsity = lambda2 * sparse_raw;
  out.total = out.hinge + out.smoothness + out.sparsity;
  return out;
}

bool ranking_satisfied(std::span<const double> pos_scores, std::span<const double> neg_scores) {
  require_bags(pos_scores, neg_scores);
  return pos_scores[argmax(pos_scores)] > neg_scores[argmax(neg_scores)];
}

double batch_objective(std::span<const BagPairScores> pairs, double lambda1, double lambda2) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyBatch, "batch has no bag pairs");
  double sum = 0.0;
  for (const auto& pair : pairs) {
    sum += mil_ranking_loss(pair.positive, pair.negative, lambda1, lambda2).total;
  }
  return sum / static_cast<double>(pairs.size());
}

}  // namespace ptde
