#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptde/defaults.hpp"
#include "ptde/video_bag.hpp"

namespace ptde {

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

/// Points run from (0, 0) at threshold +inf to (1, 1); a point at threshold t
/// classifies score >= t as positive.
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Throws LengthMismatch, DegenerateLabels.
double auc(std::span<const double> scores, std::span<const int> labels);

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

double trapezoid_area(const RocCurve& curve);

/// flag[i] = scores[i] > threshold (strict).
std::vector<bool> apply_threshold(std::span<const double> scores, double threshold);

/// Per-segment scores of one evaluated video.
struct ScoredVideo {
  std::string video_id;
  Category category = Category::Irrelevant;
  std::vector<double> scores;
  std::optional<std::vector<int>> segment_labels;

  /// Annotated labels, or the bag label repeated when no annotation exists.
  std::vector<int> labels() const;
};

struct DetectionCounts {
  std::size_t segments = 0;
  std::size_t detections = 0;
  std::size_t true_detections = 0;
  std::size_t false_detections = 0;
};

struct EvalReport {
  double overall_auc = 0.0;
  std::map<std::string, double> per_category_auc;
  double threshold = defaults::kDetectionThreshold;
  DetectionCounts counts;
};

/// Overall segment AUC plus, for each normal category present, the AUC of
/// theft segments against that category's segments only.
EvalReport per_category_eval(std::span<const ScoredVideo> videos,
                             double threshold = defaults::kDetectionThreshold);

std::string report_to_json(const EvalReport& report);

/// CSV with header "threshold,fpr,tpr".
void write_roc_csv(std::ostream& out, const RocCurve& curve);

/// Bare SVG polyline over the unit square.
void write_roc_svg(std::ostream& out, const RocCurve& curve);

}  // namespace ptde
