#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ptde/fusion.hpp"
#include "ptde/segmenting.hpp"
#include "ptde/video_bag.hpp"

namespace ptde {

// ---------------------------------------------------------------------------
// PTDF appearance feature files
//
//   "PTDF" | u32 version | u32 clip_count | u32 dim | clip_count * dim f32
//
// All integers and floats little-endian; one row per 16-frame clip.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kFeatureFileVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 16;

struct FeatureFileHeader {
  std::uint32_t version = kFeatureFileVersion;
  std::uint32_t clip_count = 0;
  std::uint32_t dim = 0;
};

FeatureFileHeader read_feature_header(const std::filesystem::path& path);

/// Throws CorruptFeatureFile (with the byte offset) on bad magic or truncation.
std::vector<ClipFeature> read_feature_file(const std::filesystem::path& path);

/// Values are narrowed to 32-bit floats.
void write_feature_file(const std::filesystem::path& path, std::span<const ClipFeature> clips);

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

enum class Split { Train, Test };

std::string_view to_string(Split split);

struct VideoRecord {
  std::string id;
  Split split = Split::Train;
  Category category = Category::Irrelevant;
  std::filesystem::path features;             // resolved against the manifest directory
  std::optional<std::filesystem::path> pose;  // resolved likewise
  std::optional<std::vector<int>> segment_labels;
  std::size_t clip_count = 0;  // from the feature file header
};

struct Manifest {
  std::string dataset;
  std::size_t feature_dim = 0;
  std::size_t clip_length = 16;
  std::size_t segment_length = 0;
  std::size_t image_width = 320;
  std::size_t image_height = 240;
  std::vector<VideoRecord> videos;
  nlohmann::json metadata = nlohmann::json::object();

  const VideoRecord* find(std::string_view id) const;
  std::size_t clips_per_segment() const { return segment_length / clip_length; }
};

/// Parses and validates a manifest; every feature header is checked against
/// feature_dim. Errors: ManifestSyntax, MissingFeatureFile,
/// InconsistentDimension, BadCategory.
Manifest load_manifest(const std::filesystem::path& path);

/// Reads clip features, aggregates them per segment, pools pose when the mode
/// needs it and fuses. Errors: UnknownVideo, EmptyVideo, MissingPose,
/// CorruptFeatureFile, MalformedPoseFile, InconsistentDimension.
VideoBag load_video_bag(const Manifest& manifest, std::string_view video_id, FusionMode mode);

/// All bags of one split, in manifest order.
std::vector<VideoBag> load_split(const Manifest& manifest, Split split, FusionMode mode);

}  // namespace ptde
