#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ptde/defaults.hpp"
#include "ptde/loss.hpp"
#include "ptde/segmenting.hpp"

namespace ptde {

/// Fully connected layer. Weights are stored inputs x outputs, row-major:
/// weights[i * outputs + j] connects input i to output j.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out) : inputs(in), outputs(out), weights(in * out), bias(out) {}

  bool operator==(const DenseLayer&) const = default;
};

inline constexpr std::array<std::size_t, 3> kLayerWidths = {
    defaults::kHidden1, defaults::kHidden2, defaults::kOutput};

/// Parameter storage shared by the head and its gradients. Blocks are exposed
/// in checkpoint order: W1, b1, W2, b2, W3, b3.
struct LayerStack {
  std::size_t input_dim = 0;
  std::array<DenseLayer, 3> layers;

  LayerStack() = default;
  explicit LayerStack(std::size_t input_dim);

  std::array<std::span<double>, 6> blocks();
  std::array<std::span<const double>, 6> blocks() const;
  std::size_t parameter_count() const;
  bool same_shape(const LayerStack& other) const;

  bool operator==(const LayerStack&) const = default;
};

/// 3-layer scorer: sigmoid(W3 relu(W2 relu(W1 x + b1) + b2) + b3).
struct ScoringHead : LayerStack {
  using LayerStack::LayerStack;
};

struct HeadGradients : LayerStack {
  using LayerStack::LayerStack;
};

/// Glorot-uniform weights, zero biases, deterministic for a seed.
ScoringHead init_head(std::size_t input_dim, std::uint64_t seed);

/// Throws DimensionMismatch when the embedding size differs from input_dim.
double score(const ScoringHead& head, std::span<const double> embedding);

std::vector<double> score_segments(const ScoringHead& head,
                                   std::span<const SegmentEmbedding> embeddings);

struct BackpropResult {
  LossBreakdown loss;
  HeadGradients gradients;
};

/// Loss of one bag pair and its gradient with respect to every parameter.
/// Subgradient conventions: relu'(0) = 0, max ties go to the lowest segment
/// index, and the hinge contributes nothing when exactly at the margin.
BackpropResult backprop(const ScoringHead& head, std::span<const SegmentEmbedding> pos_bag,
                        std::span<const SegmentEmbedding> neg_bag, double lambda1,
                        double lambda2);

/// Adds weight * d(loss)/d(params) into `into` and returns the unweighted loss.
LossBreakdown accumulate_gradients(const ScoringHead& head,
                                   std::span<const SegmentEmbedding> pos_bag,
                                   std::span<const SegmentEmbedding> neg_bag, double lambda1,
                                   double lambda2, double weight, HeadGradients& into);

}  // namespace ptde
