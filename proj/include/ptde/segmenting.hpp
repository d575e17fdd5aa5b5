#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ptde {

/// Half-open frame range [start, end).
struct FrameRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const FrameRange&) const = default;
};

/// Non-overlapping partition of a video into floor(T / L) segments of L frames.
struct SegmentPlan {
  std::size_t total_frames = 0;
  std::size_t segment_length = 0;
  std::vector<FrameRange> segments;
  std::size_t dropped_tail = 0;
};

/// Appearance embedding of one 16-frame clip.
struct ClipFeature {
  std::vector<double> values;
};

struct SegmentEmbedding {
  std::vector<double> values;
  std::size_t segment_index = 0;
};

/// Throws EmptyVideo when total_frames < segment_length; trailing frames that
/// do not fill a whole segment are dropped.
SegmentPlan plan_segments(std::size_t total_frames, std::size_t segment_length);

/// Unit-norm copy of `v`. The zero vector is returned unchanged.
std::vector<double> l2_normalize(std::span<const double> v);

/// Mean of the L2-normalized clips.
std::vector<double> aggregate_segment(std::span<const ClipFeature> clips);

}  // namespace ptde
