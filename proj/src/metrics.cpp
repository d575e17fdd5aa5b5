#include "ptde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ptde/error.hpp"

namespace ptde {

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts validate_labeled(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(scores.size()) + " scores but " +
                                               std::to_string(labels.size()) + " labels");
  }
  ClassCounts counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw Error(ErrorCode::NonFiniteInput, "NaN score");
    if (labels[i] == 1) {
      ++counts.positives;
    } else if (labels[i] == 0) {
      ++counts.negatives;
    } else {
      throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    throw Error(ErrorCode::DegenerateLabels, "need at least one positive and one negative label");
  }
  return counts;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  return order;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts counts = validate_labeled(scores, labels);
  const auto order = order_by_score(scores, false);

  // Walk groups of tied scores upward; every negative strictly below a
  // positive is a win, ties inside a group count one half. Both sums stay
  // integral (in halves) so the result is exact up to the final division.
  double wins_x2 = 0.0;
  std::size_t negatives_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t pos = 0;
    std::size_t neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? pos : neg) += 1;
      ++j;
    }
    wins_x2 += 2.0 * static_cast<double>(pos) * static_cast<double>(negatives_below) +
               static_cast<double>(pos) * static_cast<double>(neg);
    negatives_below += neg;
    i = j;
  }
  return wins_x2 /
         (2.0 * static_cast<double>(counts.positives) * static_cast<double>(counts.negatives));
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts counts = validate_labeled(scores, labels);
  const auto order = order_by_score(scores, true);
  const double n_pos = static_cast<double>(counts.positives);
  const double n_neg = static_cast<double>(counts.negatives);

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back(
        {threshold, static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
  }
  return curve;
}

double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

std::vector<bool> apply_threshold(std::span<const double> scores, double threshold) {
  std::vector<bool> flags(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) flags[i] = scores[i] > threshold;
  return flags;
}

std::vector<int> ScoredVideo::labels() const {
  if (segment_labels) return *segment_labels;
  return std::vector<int>(scores.size(), category == Category::PackageTheft ? 1 : 0);
}

EvalReport per_category_eval(std::span<const ScoredVideo> videos, double threshold) {
  EvalReport report;
  report.threshold = threshold;

  std::vector<double> all_scores;
  std::vector<int> all_labels;
  std::vector<double> theft_scores;
  std::map<Category, std::vector<double>> normal_scores;

  for (const auto& video : videos) {
    const auto labels = video.labels();
    if (labels.size() != video.scores.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "video " + video.video_id + " has " + std::to_string(video.scores.size()) +
                      " scores but " + std::to_string(labels.size()) + " segment labels");
    }
    const auto flags = apply_threshold(video.scores, threshold);
    for (std::size_t i = 0; i < video.scores.size(); ++i) {
      all_scores.push_back(video.scores[i]);
      all_labels.push_back(labels[i]);
      ++report.counts.segments;
      if (flags[i]) {
        ++report.counts.detections;
        ++(labels[i] == 1 ? report.counts.true_detections : report.counts.false_detections);
      }
      if (video.category == Category::PackageTheft) {
        if (labels[i] == 1) theft_scores.push_back(video.scores[i]);
      } else {
        normal_scores[video.category].push_back(video.scores[i]);
      }
    }
  }

  report.overall_auc = auc(all_scores, all_labels);

  for (const auto& [category, negatives] : normal_scores) {
    if (theft_scores.empty() || negatives.empty()) continue;
    std::vector<double> scores = theft_scores;
    scores.insert(scores.end(), negatives.begin(), negatives.end());
    std::vector<int> labels(theft_scores.size(), 1);
    labels.resize(scores.size(), 0);
    report.per_category_auc[std::string(to_string(category))] = auc(scores, labels);
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["overall_auc"] = report.overall_auc;
  doc["per_category_auc"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.per_category_auc) doc["per_category_auc"][name] = value;
  doc["threshold"] = report.threshold;
  doc["detections"] = {{"segments", report.counts.segments},
                       {"detections", report.counts.detections},
                       {"true_detections", report.counts.true_detections},
                       {"false_detections", report.counts.false_detections}};
  return doc.dump(2);
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    if (std::isinf(p.threshold)) {
      out << (p.threshold > 0 ? "inf" : "-inf");
    } else {
      out << p.threshold;
    }
    out << ',' << p.fpr << ',' << p.tpr << '\n';
  }
  out.precision(old_precision);
}

void write_roc_svg(std::ostream& out, const RocCurve& curve) {
  constexpr int kSize = 400;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 1 1\">\n";
  out << "<g transform=\"translate(0,1) scale(1,-1)\">\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.005\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (i) out << ' ';
    out << curve.points[i].fpr << ',' << curve.points[i].tpr;
  }
  out << "\"/>\n</g>\n</svg>\n";
}

}  // namespace ptde
