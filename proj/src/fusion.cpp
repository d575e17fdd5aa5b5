#include "ptde/fusion.hpp"

#include <string>

#include "ptde/error.hpp"

namespace ptde {

std::string_view to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::GlobalOnly: return "global";
    case FusionMode::GlobalLocalConcat: return "global-local";
  }
  return "unknown";
}

std::optional<FusionMode> parse_fusion_mode(std::string_view text) {
  if (text == "global" || text == "GlobalOnly") return FusionMode::GlobalOnly;
  if (text == "global-local" || text == "GlobalLocalConcat") return FusionMode::GlobalLocalConcat;
  return std::nullopt;
}

std::size_t fused_dimension(std::size_t appearance_dim, FusionMode mode) {
  return mode == FusionMode::GlobalOnly ? appearance_dim
                                        : appearance_dim + defaults::kPoseFeatureDim;
}

SegmentEmbedding fuse(const SegmentEmbedding& appearance,
                      const std::optional<PoseSegmentFeature>& pose, FusionMode mode,
                      std::size_t appearance_dim) {
  if (appearance.values.size() != appearance_dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "appearance embedding has dimension " + std::to_string(appearance.values.size()) +
                    ", dataset dimension is " + std::to_string(appearance_dim));
  }
  if (mode == FusionMode::GlobalOnly) {
    if (pose) throw Error(ErrorCode::InvalidArgument, "pose supplied to global-only fusion");
    return appearance;
  }
  if (!pose) {
    throw Error(ErrorCode::MissingPose,
                "segment " + std::to_string(appearance.segment_index) + " has no pose feature");
  }
  SegmentEmbedding out;
  out.segment_index = appearance.segment_index;
  out.values.reserve(appearance_dim + defaults::kPoseFeatureDim);
  out.values.insert(out.values.end(), appearance.values.begin(), appearance.values.end());
  out.values.insert(out.values.end(), pose->values.begin(), pose->values.end());
  return out;
}

}  // namespace ptde
