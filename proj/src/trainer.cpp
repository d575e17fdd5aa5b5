#include "ptde/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "ptde/error.hpp"
#include "ptde/rng.hpp"

namespace ptde {

namespace {

// Decorrelates the pair sampler from the head initializer, which shares the seed.
constexpr std::uint64_t kSamplerStream = 0x9E3779B97F4A7C15ULL;

}  // namespace

void validate(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
  }
  if (config.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (config.pairs_per_epoch < 1) {
    throw Error(ErrorCode::InvalidArgument, "pairs per epoch must be >= 1");
  }
  if (config.lambda1 < 0.0 || config.lambda2 < 0.0) {
    throw Error(ErrorCode::NegativeLambda, "regularization weights must be non-negative");
  }
  if (!(config.adagrad_epsilon >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "adagrad epsilon must be non-negative");
  }
}

void adagrad_step(ScoringHead& head, const HeadGradients& grads, AdagradState& state,
                  double learning_rate, double epsilon) {
  if (!grads.same_shape(head) || !state.accumulators.same_shape(head)) {
    throw Error(ErrorCode::ShapeMismatch, "head, gradients and optimizer state differ in shape");
  }
  auto params = head.blocks();
  const auto g = grads.blocks();
  auto acc = state.accumulators.blocks();
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) {
      const double gi = g[b][i];
      acc[b][i] += gi * gi;
      params[b][i] -= learning_rate * gi / (std::sqrt(acc[b][i]) + epsilon);
    }
  }
  ++state.steps;
}

TrainRun train(std::span<const VideoBag> dataset, const TrainConfig& config,
               const TrainObserver& observer) {
  validate(config);

  std::vector<const VideoBag*> positives;
  std::vector<const VideoBag*> negatives;
  std::size_t dim = 0;
  for (const auto& bag : dataset) {
    if (bag.segments.empty()) {
      throw Error(ErrorCode::EmptyBag, "video " + bag.video_id + " has no segments");
    }
    if (dim == 0) dim = bag.dimension();
    for (const auto& seg : bag.segments) {
      if (seg.values.size() != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "video " + bag.video_id + " has embedding dimension " +
                        std::to_string(seg.values.size()) + ", expected " + std::to_string(dim));
      }
    }
    (bag.positive() ? positives : negatives).push_back(&bag);
  }
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorCode::InsufficientData,
                "training needs at least one positive and one negative video (got " +
                    std::to_string(positives.size()) + " positive, " +
                    std::to_string(negatives.size()) + " negative)");
  }

  TrainRun run;
  run.config = config;
  run.head = init_head(dim, config.seed);
  run.history.reserve(config.epochs);

  AdagradState state(run.head);
  HeadGradients grads(dim);
  Rng sampler(config.seed ^ kSamplerStream);
  const double weight = 1.0 / static_cast<double>(config.pairs_per_epoch);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (auto block : grads.blocks()) std::fill(block.begin(), block.end(), 0.0);

    EpochLoss record;
    record.epoch = epoch;
    for (std::size_t p = 0; p < config.pairs_per_epoch; ++p) {
      const VideoBag& pos = *positives[sampler.index(positives.size())];
      const VideoBag& neg = *negatives[sampler.index(negatives.size())];
      const LossBreakdown loss = accumulate_gradients(run.head, pos.segments, neg.segments,
                                                      config.lambda1, config.lambda2, weight, grads);
      record.total += loss.total;
      record.hinge += loss.hinge;
      record.smoothness += loss.smoothness;
      record.sparsity += loss.sparsity;
    }
    record.total *= weight;
    record.hinge *= weight;
    record.smoothness *= weight;
    record.sparsity *= weight;

    if (!std::isfinite(record.total)) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "objective became non-finite at epoch " + std::to_string(epoch));
    }

    adagrad_step(run.head, grads, state, config.learning_rate, config.adagrad_epsilon);
    run.history.push_back(record);
    if (observer) observer(record, run.head, state);
  }
  return run;
}

void write_run_log(std::ostream& out, std::span<const EpochLoss> history) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : history) {
    out << e.epoch << '\t' << e.total << '\t' << e.hinge << '\t' << e.smoothness << '\t'
        << e.sparsity << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ptde
