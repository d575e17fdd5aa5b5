#include "ptde/segmenting.hpp"

#include <cmath>
#include <string>

#include "ptde/error.hpp"

namespace ptde {

SegmentPlan plan_segments(std::size_t total_frames, std::size_t segment_length) {
  if (segment_length == 0) {
    throw Error(ErrorCode::InvalidArgument, "segment length must be at least 1 frame");
  }
  if (total_frames < segment_length) {
    throw Error(ErrorCode::EmptyVideo, "video has " + std::to_string(total_frames) +
                                           " frames, fewer than one segment of " +
                                           std::to_string(segment_length));
  }

  SegmentPlan plan;
  plan.total_frames = total_frames;
  plan.segment_length = segment_length;
  const std::size_t count = total_frames / segment_length;
  plan.segments.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    plan.segments.push_back({i * segment_length, (i + 1) * segment_length});
  }
  plan.dropped_tail = total_frames % segment_length;
  return plan;
}

std::vector<double> l2_normalize(std::span<const double> v) {
  double sum_sq = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::NonFiniteInput, "cannot normalize a vector with NaN/inf entries");
    }
    sum_sq += x * x;
  }
  std::vector<double> out(v.begin(), v.end());
  if (sum_sq == 0.0) return out;
  const double norm = std::sqrt(sum_sq);
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> aggregate_segment(std::span<const ClipFeature> clips) {
  if (clips.empty()) {
    throw Error(ErrorCode::EmptySegment, "segment has no clips to aggregate");
  }
  const std::size_t dim = clips.front().values.size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& clip : clips) {
    if (clip.values.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "clip dimension " + std::to_string(clip.values.size()) + " != " +
                      std::to_string(dim));
    }
    const auto unit = l2_normalize(clip.values);
    for (std::size_t i = 0; i < dim; ++i) mean[i] += unit[i];
  }
  const double count = static_cast<double>(clips.size());
  for (double& x : mean) x /= count;
  return mean;
}

}  // namespace ptde
