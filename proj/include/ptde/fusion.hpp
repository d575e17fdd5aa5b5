#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "ptde/pose.hpp"
#include "ptde/segmenting.hpp"

namespace ptde {

enum class FusionMode {
  GlobalOnly,         // appearance embedding only
  GlobalLocalConcat,  // appearance followed by the 54 pooled pose entries
};

std::string_view to_string(FusionMode mode);

/// Accepts "global" / "global-local" (CLI spelling) as well as the enum names.
std::optional<FusionMode> parse_fusion_mode(std::string_view text);

std::size_t fused_dimension(std::size_t appearance_dim, FusionMode mode);

/// Throws MissingPose when the mode needs pose and none is given,
/// DimensionMismatch when the appearance dimension differs from
/// `appearance_dim`, and InvalidArgument for pose supplied to GlobalOnly.
SegmentEmbedding fuse(const SegmentEmbedding& appearance,
                      const std::optional<PoseSegmentFeature>& pose, FusionMode mode,
                      std::size_t appearance_dim);

}  // namespace ptde
