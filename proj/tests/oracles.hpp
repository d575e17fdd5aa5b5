#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code paths it checks: forward passes, losses and AUCs are re-derived
// with plain scalar loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ptde/scoring_head.hpp"

namespace oracle {

inline double weight(const ptde::DenseLayer& layer, std::size_t in, std::size_t out) {
  return layer.weights[in * layer.outputs + out];
}

/// Scalar-loop forward pass: sigmoid(W3 relu(W2 relu(W1 x + b1) + b2) + b3).
inline double forward(const ptde::ScoringHead& head, const std::vector<double>& x) {
  std::vector<double> input = x;
  for (std::size_t l = 0; l < head.layers.size(); ++l) {
    const auto& layer = head.layers[l];
    std::vector<double> next(layer.outputs);
    for (std::size_t j = 0; j < layer.outputs; ++j) {
      double z = layer.bias[j];
      for (std::size_t i = 0; i < layer.inputs; ++i) z += weight(layer, i, j) * input[i];
      next[j] = l + 1 < head.layers.size() ? std::max(z, 0.0) : 1.0 / (1.0 + std::exp(-z));
    }
    input = std::move(next);
  }
  return input[0];
}

inline double max_of(const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = x > m ? x : m;
  return m;
}

/// Full objective of one bag pair, written out term by term.
inline double loss(const std::vector<double>& pos, const std::vector<double>& neg, double lambda1,
                   double lambda2) {
  double hinge = 1.0 - max_of(pos) + max_of(neg);
  if (hinge < 0.0) hinge = 0.0;
  double smooth = 0.0;
  for (std::size_t i = 1; i < pos.size(); ++i) smooth += (pos[i - 1] - pos[i]) * (pos[i - 1] - pos[i]);
  double sparse = 0.0;
  for (double s : pos) sparse += s;
  return hinge + lambda1 * smooth + lambda2 * sparse;
}

inline double bag_loss(const ptde::ScoringHead& head,
                       const std::vector<ptde::SegmentEmbedding>& pos_bag,
                       const std::vector<ptde::SegmentEmbedding>& neg_bag, double lambda1,
                       double lambda2) {
  std::vector<double> pos;
  std::vector<double> neg;
  for (const auto& s : pos_bag) pos.push_back(forward(head, s.values));
  for (const auto& s : neg_bag) neg.push_back(forward(head, s.values));
  return loss(pos, neg, lambda1, lambda2);
}

/// O(n^2) pairwise AUC: wins plus half-ties over all (positive, negative) pairs.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

/// Cached activations of one segment, used to evaluate the loss under a single
/// parameter perturbation without recomputing untouched units.
struct Activations {
  std::vector<double> x, z1, a1, z2, a2;
  double z3 = 0.0;
};

inline Activations activations(const ptde::ScoringHead& head, const std::vector<double>& x) {
  const auto& l1 = head.layers[0];
  const auto& l2 = head.layers[1];
  const auto& l3 = head.layers[2];
  Activations c;
  c.x = x;
  for (std::size_t j = 0; j < l1.outputs; ++j) {
    double z = l1.bias[j];
    for (std::size_t i = 0; i < l1.inputs; ++i) z += weight(l1, i, j) * x[i];
    c.z1.push_back(z);
    c.a1.push_back(std::max(z, 0.0));
  }
  for (std::size_t k = 0; k < l2.outputs; ++k) {
    double z = l2.bias[k];
    for (std::size_t j = 0; j < l2.inputs; ++j) z += weight(l2, j, k) * c.a1[j];
    c.z2.push_back(z);
    c.a2.push_back(std::max(z, 0.0));
  }
  c.z3 = l3.bias[0];
  for (std::size_t k = 0; k < l3.inputs; ++k) c.z3 += weight(l3, k, 0) * c.a2[k];
  return c;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Score after adding `delta` to parameter `index` of block `block`
/// (W1, b1, W2, b2, W3, b3 order). The sign of every ReLU input the change
/// can reach is appended to `pattern`.
inline double perturbed_score(const ptde::ScoringHead& head, const Activations& c, std::size_t block,
                              std::size_t index, double delta, std::vector<char>& pattern) {
  const auto& l2 = head.layers[1];
  const auto& l3 = head.layers[2];
  // Output after hidden-2 unit k moves by dz.
  auto from_z2 = [&](std::size_t k, double dz) {
    const double z = c.z2[k] + dz;
    pattern.push_back(z > 0.0);
    const double a = std::max(z, 0.0);
    return sigmoid(c.z3 + weight(l3, k, 0) * (a - c.a2[k]));
  };
  // Propagates a change of hidden-1 unit j through the whole second layer.
  auto from_z1 = [&](std::size_t j, double dz) {
    pattern.push_back(c.z1[j] + dz > 0.0);
    const double da = std::max(c.z1[j] + dz, 0.0) - c.a1[j];
    double z3 = l3.bias[0];
    for (std::size_t k = 0; k < l2.outputs; ++k) {
      const double z = c.z2[k] + weight(l2, j, k) * da;
      pattern.push_back(z > 0.0);
      z3 += weight(l3, k, 0) * std::max(z, 0.0);
    }
    return sigmoid(z3);
  };
  const std::size_t h1 = head.layers[0].outputs;
  switch (block) {
    case 0: return from_z1(index % h1, delta * c.x[index / h1]);
    case 1: return from_z1(index, delta);
    case 2: return from_z2(index % l2.outputs, delta * c.a1[index / l2.outputs]);
    case 3: return from_z2(index, delta);
    case 4: return sigmoid(c.z3 + delta * c.a2[index]);
    default: return sigmoid(c.z3 + delta);
  }
}

inline double perturbed_score(const ptde::ScoringHead& head, const Activations& c, std::size_t block,
                              std::size_t index, double delta) {
  std::vector<char> ignored;
  return perturbed_score(head, c, block, index, delta, ignored);
}

inline std::size_t first_max(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) best = v[i] > v[best] ? i : best;
  return best;
}

struct GradientCheck {
  std::size_t checked = 0;
  std::size_t significant = 0;  // entries with magnitude above the absolute floor
  std::size_t failures = 0;
  std::size_t kinks = 0;  // stencils straddling a ReLU, max or hinge switch; not compared
  double worst_relative = 0.0;
};

/// Compares analytic gradients against central finite differences of the
/// bag-pair loss. An entry passes when |a - n| <= abs_floor or
/// |a - n| / max(|a|, |n|) < rel_tol. worst_relative covers the entries whose
/// magnitude exceeds abs_floor. Entries whose +step and -step evaluations
/// see different ReLU signs, bag argmaxes or hinge activity sit on a
/// non-differentiable point; they are counted in `kinks` and not compared.
/// `stride` > 1 checks every stride-th
/// entry of each block (offset by `phase`).
inline GradientCheck check_gradients(const ptde::ScoringHead& head,
                                     const ptde::HeadGradients& analytic,
                                     const std::vector<ptde::SegmentEmbedding>& pos_bag,
                                     const std::vector<ptde::SegmentEmbedding>& neg_bag,
                                     double lambda1, double lambda2, double step, double rel_tol,
                                     double abs_floor, std::size_t stride = 1,
                                     std::size_t phase = 0) {
  std::vector<Activations> pos_cache;
  std::vector<Activations> neg_cache;
  for (const auto& s : pos_bag) pos_cache.push_back(activations(head, s.values));
  for (const auto& s : neg_bag) neg_cache.push_back(activations(head, s.values));

  auto loss_at = [&](std::size_t b, std::size_t i, double delta, std::vector<char>& pattern) {
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto& c : pos_cache) pos.push_back(perturbed_score(head, c, b, i, delta, pattern));
    for (const auto& c : neg_cache) neg.push_back(perturbed_score(head, c, b, i, delta, pattern));
    pattern.push_back(static_cast<char>(first_max(pos)));
    pattern.push_back(static_cast<char>(first_max(neg)));
    pattern.push_back(1.0 - max_of(pos) + max_of(neg) > 0.0);
    return loss(pos, neg, lambda1, lambda2);
  };

  GradientCheck result;
  const auto grads = analytic.blocks();
  for (std::size_t b = 0; b < grads.size(); ++b) {
    for (std::size_t i = phase % stride; i < grads[b].size(); i += stride) {
      std::vector<char> up_pattern;
      std::vector<char> down_pattern;
      const double up = loss_at(b, i, step, up_pattern);
      const double down = loss_at(b, i, -step, down_pattern);
      ++result.checked;
      if (up_pattern != down_pattern) {
        ++result.kinks;
        continue;
      }
      const double numeric = (up - down) / (2.0 * step);
      const double a = grads[b][i];
      const double diff = std::abs(a - numeric);
      const double scale = std::max(std::abs(a), std::abs(numeric));
      if (scale <= abs_floor) continue;
      ++result.significant;
      const double rel = diff / scale;
      result.worst_relative = std::max(result.worst_relative, rel);
      if (diff > abs_floor && rel >= rel_tol) ++result.failures;
    }
  }
  return result;
}

}  // namespace oracle
