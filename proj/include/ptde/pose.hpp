#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptde/defaults.hpp"

namespace ptde {

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  bool operator==(const Keypoint&) const = default;
};

/// One detected person in COCO-18 order, raw pixel coordinates.
using PersonKeypoints = std::array<Keypoint, defaults::kPoseJoints>;

/// All persons the estimator reported for one frame (possibly none).
using FrameCandidates = std::vector<PersonKeypoints>;

/// Per-frame local feature: normalized coordinates of the selected person.
struct PoseFrame {
  std::array<Keypoint, defaults::kPoseJoints> joints{};
  bool person_present = false;

  std::array<double, defaults::kPoseFeatureDim> flatten() const;
  bool operator==(const PoseFrame&) const = default;
};

struct PoseSegmentFeature {
  std::array<double, defaults::kPoseFeatureDim> values{};
};

/// Parses a keypoint document: array of frames, frame = array of persons,
/// person = exactly 18 [x, y, confidence] triples. Throws MalformedPoseFile.
std::vector<FrameCandidates> parse_pose_document(std::string_view text);

std::vector<FrameCandidates> read_pose_file(const std::filesystem::path& path);

/// Inverse of parse_pose_document, used by the mock extractor.
std::string write_pose_document(std::span<const FrameCandidates> frames);

/// Keeps the candidate with the highest mean joint confidence (lowest index
/// on ties), scales pixels into [0, 1] and clamps. No candidates yields the
/// all-zero frame with person_present = false.
PoseFrame pose_feature(const FrameCandidates& candidates, std::size_t image_width,
                       std::size_t image_height);

/// Element-wise mean of the flattened frames.
PoseSegmentFeature pool_pose(std::span<const PoseFrame> frames);

}  // namespace ptde
