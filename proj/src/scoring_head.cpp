#include "ptde/scoring_head.hpp"

#include <cmath>
#include <string>

#include "ptde/error.hpp"
#include "ptde/rng.hpp"

namespace ptde {

namespace {

struct Activations {
  std::vector<double> z1, a1, z2, a2;
  double score = 0.0;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void dense_forward(const DenseLayer& layer, std::span<const double> x, std::vector<double>& out) {
  out.assign(layer.bias.begin(), layer.bias.end());
  const std::size_t n_out = layer.outputs;
  for (std::size_t i = 0; i < layer.inputs; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = layer.weights.data() + i * n_out;
    for (std::size_t j = 0; j < n_out; ++j) out[j] += xi * row[j];
  }
}

void relu(const std::vector<double>& z, std::vector<double>& a) {
  a.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] < 0.0 ? 0.0 : z[i];  // NaN passes through
}

void check_dim(const ScoringHead& head, std::size_t dim) {
  if (dim != head.input_dim) {
    throw Error(ErrorCode::DimensionMismatch, "embedding dimension " + std::to_string(dim) +
                                                  " != head input dimension " +
                                                  std::to_string(head.input_dim));
  }
}

void forward(const ScoringHead& head, std::span<const double> x, Activations& act) {
  check_dim(head, x.size());
  dense_forward(head.layers[0], x, act.z1);
  relu(act.z1, act.a1);
  dense_forward(head.layers[1], act.a1, act.z2);
  relu(act.z2, act.a2);
  std::vector<double> z3;
  dense_forward(head.layers[2], act.a2, z3);
  act.score = sigmoid(z3[0]);
}

// Backpropagates an upstream gradient d(loss)/d(score) through one segment.
void backward(const ScoringHead& head, std::span<const double> x, const Activations& act,
              double upstream, HeadGradients& grads) {
  const auto& l1 = head.layers[0];
  const auto& l2 = head.layers[1];
  const auto& l3 = head.layers[2];
  auto& g1 = grads.layers[0];
  auto& g2 = grads.layers[1];
  auto& g3 = grads.layers[2];

  const double d3 = upstream * act.score * (1.0 - act.score);
  for (std::size_t i = 0; i < l3.inputs; ++i) g3.weights[i] += d3 * act.a2[i];
  g3.bias[0] += d3;

  std::vector<double> d2(l2.outputs);
  for (std::size_t j = 0; j < l2.outputs; ++j) {
    d2[j] = act.z2[j] > 0.0 ? d3 * l3.weights[j] : 0.0;
  }
  for (std::size_t j = 0; j < l2.outputs; ++j) g2.bias[j] += d2[j];

  std::vector<double> d1(l1.outputs, 0.0);
  for (std::size_t i = 0; i < l2.inputs; ++i) {
    const double* w_row = l2.weights.data() + i * l2.outputs;
    double* g_row = g2.weights.data() + i * l2.outputs;
    const double ai = act.a1[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < l2.outputs; ++j) {
      g_row[j] += ai * d2[j];
      acc += w_row[j] * d2[j];
    }
    d1[i] = act.z1[i] > 0.0 ? acc : 0.0;
  }
  for (std::size_t i = 0; i < l1.outputs; ++i) g1.bias[i] += d1[i];

  for (std::size_t k = 0; k < l1.inputs; ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    double* g_row = g1.weights.data() + k * l1.outputs;
    for (std::size_t i = 0; i < l1.outputs; ++i) g_row[i] += xk * d1[i];
  }
}

}  // namespace

LayerStack::LayerStack(std::size_t dim) : input_dim(dim) {
  std::size_t fan_in = dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l] = DenseLayer(fan_in, kLayerWidths[l]);
    fan_in = kLayerWidths[l];
  }
}

std::array<std::span<double>, 6> LayerStack::blocks() {
  return {layers[0].weights, layers[0].bias, layers[1].weights,
          layers[1].bias,    layers[2].weights, layers[2].bias};
}

std::array<std::span<const double>, 6> LayerStack::blocks() const {
  return {layers[0].weights, layers[0].bias, layers[1].weights,
          layers[1].bias,    layers[2].weights, layers[2].bias};
}

std::size_t LayerStack::parameter_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks()) n += b.size();
  return n;
}

bool LayerStack::same_shape(const LayerStack& other) const {
  if (input_dim != other.input_dim) return false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].inputs != other.layers[l].inputs ||
        layers[l].outputs != other.layers[l].outputs ||
        layers[l].weights.size() != other.layers[l].weights.size() ||
        layers[l].bias.size() != other.layers[l].bias.size()) {
      return false;
    }
  }
  return true;
}

ScoringHead init_head(std::size_t input_dim, std::uint64_t seed) {
  if (input_dim == 0) throw Error(ErrorCode::InvalidArgument, "input dimension must be >= 1");
  ScoringHead head(input_dim);
  Rng rng(seed);
  for (auto& layer : head.layers) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
  }
  return head;
}

double score(const ScoringHead& head, std::span<const double> embedding) {
  Activations act;
  forward(head, embedding, act);
  return act.score;
}

std::vector<double> score_segments(const ScoringHead& head,
                                   std::span<const SegmentEmbedding> embeddings) {
  std::vector<double> out;
  out.reserve(embeddings.size());
  Activations act;
  for (const auto& e : embeddings) {
    forward(head, e.values, act);
    out.push_back(act.score);
  }
  return out;
}

LossBreakdown accumulate_gradients(const ScoringHead& head,
                                   std::span<const SegmentEmbedding> pos_bag,
                                   std::span<const SegmentEmbedding> neg_bag, double lambda1,
                                   double lambda2, double weight, HeadGradients& into) {
  if (pos_bag.empty()) throw Error(ErrorCode::EmptyBag, "positive bag has no segments");
  if (neg_bag.empty()) throw Error(ErrorCode::EmptyBag, "negative bag has no segments");
  if (!into.same_shape(head)) {
    throw Error(ErrorCode::ShapeMismatch, "gradient buffer does not match head shape");
  }

  std::vector<Activations> pos_act(pos_bag.size());
  std::vector<Activations> neg_act(neg_bag.size());
  std::vector<double> pos_scores(pos_bag.size());
  std::vector<double> neg_scores(neg_bag.size());
  for (std::size_t i = 0; i < pos_bag.size(); ++i) {
    forward(head, pos_bag[i].values, pos_act[i]);
    pos_scores[i] = pos_act[i].score;
  }
  for (std::size_t i = 0; i < neg_bag.size(); ++i) {
    forward(head, neg_bag[i].values, neg_act[i]);
    neg_scores[i] = neg_act[i].score;
  }

  const LossBreakdown loss = mil_ranking_loss(pos_scores, neg_scores, lambda1, lambda2);

  // d(loss)/d(score) per segment.
  std::vector<double> pos_grad(pos_bag.size(), lambda2);
  std::vector<double> neg_grad(neg_bag.size(), 0.0);
  const std::size_t top_pos = argmax(pos_scores);
  const std::size_t top_neg = argmax(neg_scores);
  if (1.0 - pos_scores[top_pos] + neg_scores[top_neg] > 0.0) {
    pos_grad[top_pos] -= 1.0;
    neg_grad[top_neg] += 1.0;
  }
  for (std::size_t i = 0; i + 1 < pos_scores.size(); ++i) {
    const double d = 2.0 * lambda1 * (pos_scores[i] - pos_scores[i + 1]);
    pos_grad[i] += d;
    pos_grad[i + 1] -= d;
  }

  for (std::size_t i = 0; i < pos_bag.size(); ++i) {
    if (pos_grad[i] != 0.0) backward(head, pos_bag[i].values, pos_act[i], weight * pos_grad[i], into);
  }
  for (std::size_t i = 0; i < neg_bag.size(); ++i) {
    if (neg_grad[i] != 0.0) backward(head, neg_bag[i].values, neg_act[i], weight * neg_grad[i], into);
  }
  return loss;
}

BackpropResult backprop(const ScoringHead& head, std::span<const SegmentEmbedding> pos_bag,
                        std::span<const SegmentEmbedding> neg_bag, double lambda1,
                        double lambda2) {
  BackpropResult out{{}, HeadGradients(head.input_dim)};
  out.loss = accumulate_gradients(head, pos_bag, neg_bag, lambda1, lambda2, 1.0, out.gradients);
  return out;
}

}  // namespace ptde
