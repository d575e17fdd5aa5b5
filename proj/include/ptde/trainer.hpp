#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ptde/defaults.hpp"
#include "ptde/fusion.hpp"
#include "ptde/scoring_head.hpp"
#include "ptde/video_bag.hpp"

namespace ptde {

struct TrainConfig {
  double learning_rate = defaults::kLearningRate;
  std::size_t epochs = defaults::kEpochs;
  std::size_t pairs_per_epoch = defaults::kPairsPerEpoch;
  double lambda1 = defaults::kLambdaSmoothness;
  double lambda2 = defaults::kLambdaSparsity;
  std::uint64_t seed = 0;
  double adagrad_epsilon = defaults::kAdagradEpsilon;
  FusionMode fusion_mode = FusionMode::GlobalLocalConcat;

  bool operator==(const TrainConfig&) const = default;
};

/// Throws InvalidArgument / NegativeLambda for out-of-range fields.
void validate(const TrainConfig& config);

/// Running sum of squared gradients, one entry per head parameter.
struct AdagradState {
  HeadGradients accumulators;
  std::uint64_t steps = 0;

  AdagradState() = default;
  explicit AdagradState(const LayerStack& shape) : accumulators(shape.input_dim) {}
};

/// accumulator += g^2; param -= lr * g / (sqrt(accumulator) + epsilon).
/// Throws ShapeMismatch when head, gradients and state disagree.
void adagrad_step(ScoringHead& head, const HeadGradients& grads, AdagradState& state,
                  double learning_rate, double epsilon);

/// Batch means of the loss terms for one epoch.
struct EpochLoss {
  std::size_t epoch = 0;  // 1-based
  double total = 0.0;
  double hinge = 0.0;
  double smoothness = 0.0;
  double sparsity = 0.0;

  bool operator==(const EpochLoss&) const = default;
};

struct TrainRun {
  ScoringHead head;
  std::vector<EpochLoss> history;
  TrainConfig config;
};

using TrainObserver =
    std::function<void(const EpochLoss&, const ScoringHead&, const AdagradState&)>;

/// One Adagrad step per epoch on pairs_per_epoch (positive, negative) bag
/// pairs sampled with replacement. Fully determined by (dataset, config).
/// Throws InsufficientData when a class is missing and NonFiniteLoss (naming
/// the epoch) when the objective diverges.
TrainRun train(std::span<const VideoBag> dataset, const TrainConfig& config,
               const TrainObserver& observer = {});

/// "epoch\ttotal\thinge\tsmoothness\tsparsity" per line.
void write_run_log(std::ostream& out, std::span<const EpochLoss> history);

}  // namespace ptde
