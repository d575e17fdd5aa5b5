#include "ptde/dataset_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "binary_io.hpp"
#include "ptde/error.hpp"
#include "ptde/pose.hpp"

namespace fs = std::filesystem;

namespace ptde {

namespace {

using json = nlohmann::json;

[[noreturn]] void corrupt_feature(const fs::path& path, std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::CorruptFeatureFile,
              path.string() + " at byte offset " + std::to_string(offset) + ": " + what);
}

FeatureFileHeader parse_header(detail::ByteReader& reader, const fs::path& path) {
  const auto magic = reader.get_bytes(4);
  if (!magic) corrupt_feature(path, reader.offset(), "truncated header");
  if (*magic != "PTDF") corrupt_feature(path, 0, "bad magic, expected PTDF");
  FeatureFileHeader header;
  const auto version = reader.get_u32();
  const auto clips = reader.get_u32();
  const auto dim = reader.get_u32();
  if (!version || !clips || !dim) corrupt_feature(path, reader.offset(), "truncated header");
  if (*version != kFeatureFileVersion) {
    corrupt_feature(path, 4, "unsupported version " + std::to_string(*version));
  }
  header.version = *version;
  header.clip_count = *clips;
  header.dim = *dim;
  return header;
}

[[noreturn]] void manifest_error(const fs::path& path, const std::string& what) {
  throw Error(ErrorCode::ManifestSyntax, path.string() + ": " + what);
}

std::size_t require_count(const json& obj, const char* key, const fs::path& path) {
  if (!obj.contains(key) || !obj[key].is_number_unsigned()) {
    manifest_error(path, std::string("\"") + key + "\" must be a non-negative integer");
  }
  return obj[key].get<std::size_t>();
}

std::string require_string(const json& obj, const char* key, const fs::path& path,
                           const std::string& context) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    manifest_error(path, context + "\"" + key + "\" must be a string");
  }
  return obj[key].get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& rel) {
  fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

FeatureFileHeader read_feature_header(const fs::path& path) {
  detail::ByteReader reader(
      detail::read_file_bytes(path, ErrorCode::MissingFeatureFile, kFeatureHeaderBytes));
  return parse_header(reader, path);
}

std::vector<ClipFeature> read_feature_file(const fs::path& path) {
  detail::ByteReader reader(detail::read_file_bytes(path, ErrorCode::MissingFeatureFile));
  const FeatureFileHeader header = parse_header(reader, path);

  std::vector<ClipFeature> clips(header.clip_count);
  for (auto& clip : clips) {
    clip.values.resize(header.dim);
    for (double& v : clip.values) {
      const auto f = reader.get_f32();
      if (!f) corrupt_feature(path, reader.offset(), "truncated mid-record");
      v = static_cast<double>(*f);
    }
  }
  if (reader.remaining() != 0) {
    corrupt_feature(path, reader.offset(), "trailing bytes after last clip");
  }
  return clips;
}

void write_feature_file(const fs::path& path, std::span<const ClipFeature> clips) {
  const std::size_t dim = clips.empty() ? 0 : clips.front().values.size();
  detail::ByteWriter writer;
  writer.put_bytes("PTDF");
  writer.put_u32(kFeatureFileVersion);
  writer.put_u32(static_cast<std::uint32_t>(clips.size()));
  writer.put_u32(static_cast<std::uint32_t>(dim));
  for (const auto& clip : clips) {
    if (clip.values.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "clips of a feature file must share one dimension");
    }
    for (double v : clip.values) writer.put_f32(static_cast<float>(v));
  }
  writer.write_to(path);
}

const VideoRecord* Manifest::find(std::string_view id) const {
  for (const auto& v : videos) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    manifest_error(path, e.what());
  }
  if (!doc.is_object()) manifest_error(path, "top level must be an object");

  Manifest m;
  m.dataset = require_string(doc, "dataset", path, "");
  m.feature_dim = require_count(doc, "feature_dim", path);
  m.segment_length = require_count(doc, "segment_length", path);
  if (doc.contains("clip_length")) m.clip_length = require_count(doc, "clip_length", path);
  if (doc.contains("image_width")) m.image_width = require_count(doc, "image_width", path);
  if (doc.contains("image_height")) m.image_height = require_count(doc, "image_height", path);
  if (doc.contains("metadata")) m.metadata = doc["metadata"];

  if (m.feature_dim == 0) manifest_error(path, "feature_dim must be positive");
  if (m.clip_length != defaults::kClipLength) {
    manifest_error(path, "clip_length must be " + std::to_string(defaults::kClipLength));
  }
  if (m.segment_length == 0 || m.segment_length % m.clip_length != 0) {
    manifest_error(path, "segment_length must be a positive multiple of the clip length");
  }
  if (m.image_width == 0 || m.image_height == 0) {
    manifest_error(path, "image dimensions must be positive");
  }
  if (!doc.contains("videos") || !doc["videos"].is_array()) {
    manifest_error(path, "\"videos\" must be an array");
  }

  const fs::path base = path.parent_path();
  std::set<std::string> seen;
  for (const json& entry : doc["videos"]) {
    if (!entry.is_object()) manifest_error(path, "video entries must be objects");
    VideoRecord rec;
    rec.id = require_string(entry, "id", path, "");
    const std::string ctx = "video " + rec.id + ": ";
    if (!seen.insert(rec.id).second) manifest_error(path, "duplicate video id " + rec.id);

    const std::string split = require_string(entry, "split", path, ctx);
    if (split == "train") {
      rec.split = Split::Train;
    } else if (split == "test") {
      rec.split = Split::Test;
    } else {
      manifest_error(path, ctx + "split must be \"train\" or \"test\"");
    }

    const std::string category = require_string(entry, "category", path, ctx);
    const auto parsed = parse_category(category);
    if (!parsed) {
      throw Error(ErrorCode::BadCategory,
                  path.string() + ": " + ctx + "unknown category \"" + category +
                      "\" (expected PackageTheft, Pickup, Delivery or Irrelevant)");
    }
    rec.category = *parsed;

    rec.features = resolve(base, require_string(entry, "features", path, ctx));
    if (!fs::exists(rec.features)) {
      throw Error(ErrorCode::MissingFeatureFile, "feature file not found: " + rec.features.string());
    }
    const FeatureFileHeader header = read_feature_header(rec.features);
    if (header.dim != m.feature_dim) {
      throw Error(ErrorCode::InconsistentDimension,
                  rec.features.string() + " has dimension " + std::to_string(header.dim) +
                      ", manifest declares " + std::to_string(m.feature_dim));
    }
    rec.clip_count = header.clip_count;

    if (entry.contains("pose") && !entry["pose"].is_null()) {
      rec.pose = resolve(base, require_string(entry, "pose", path, ctx));
      if (!fs::exists(*rec.pose)) {
        throw Error(ErrorCode::MissingFeatureFile, "pose file not found: " + rec.pose->string());
      }
    }

    if (entry.contains("segment_labels") && !entry["segment_labels"].is_null()) {
      const json& labels = entry["segment_labels"];
      if (!labels.is_array()) manifest_error(path, ctx + "segment_labels must be an array");
      std::vector<int> out;
      for (const json& l : labels) {
        if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1)) {
          manifest_error(path, ctx + "segment_labels entries must be 0 or 1");
        }
        out.push_back(l.get<int>());
      }
      if (rec.category != Category::PackageTheft) {
        for (int l : out) {
          if (l == 1) manifest_error(path, ctx + "normal video cannot contain theft segments");
        }
      }
      const std::size_t segments = rec.clip_count * m.clip_length / m.segment_length;
      if (segments > 0 && out.size() != segments) {
        throw Error(ErrorCode::InconsistentDimension,
                    ctx + std::to_string(out.size()) + " segment labels for " +
                        std::to_string(segments) + " segments");
      }
      rec.segment_labels = std::move(out);
    }
    m.videos.push_back(std::move(rec));
  }
  return m;
}

VideoBag load_video_bag(const Manifest& manifest, std::string_view video_id, FusionMode mode) {
  const VideoRecord* rec = manifest.find(video_id);
  if (!rec) throw Error(ErrorCode::UnknownVideo, "no video \"" + std::string(video_id) + "\" in manifest");
  if (mode == FusionMode::GlobalLocalConcat && !rec->pose) {
    throw Error(ErrorCode::MissingPose, "video " + rec->id + " has no pose file");
  }

  const auto clips = read_feature_file(rec->features);
  if (!clips.empty() && clips.front().values.size() != manifest.feature_dim) {
    throw Error(ErrorCode::InconsistentDimension,
                rec->features.string() + " does not match manifest feature_dim");
  }

  SegmentPlan plan;
  try {
    plan = plan_segments(clips.size() * manifest.clip_length, manifest.segment_length);
  } catch (const Error& e) {
    throw Error(e.code(), "video " + rec->id + ": " + e.what());
  }

  std::vector<FrameCandidates> pose_frames;
  if (mode == FusionMode::GlobalLocalConcat) {
    pose_frames = read_pose_file(*rec->pose);
    const std::size_t needed = plan.segments.size() * plan.segment_length;
    if (pose_frames.size() < needed) {
      throw Error(ErrorCode::MalformedPoseFile,
                  rec->pose->string() + " has " + std::to_string(pose_frames.size()) +
                      " frames, segments cover " + std::to_string(needed));
    }
  }

  VideoBag bag;
  bag.video_id = rec->id;
  bag.category = rec->category;
  bag.segments.reserve(plan.segments.size());
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    const FrameRange range = plan.segments[s];
    const std::size_t first_clip = range.start / manifest.clip_length;
    const std::size_t last_clip = range.end / manifest.clip_length;

    SegmentEmbedding appearance;
    appearance.segment_index = s;
    appearance.values = aggregate_segment(
        std::span<const ClipFeature>(clips).subspan(first_clip, last_clip - first_clip));

    std::optional<PoseSegmentFeature> pose;
    if (mode == FusionMode::GlobalLocalConcat) {
      std::vector<PoseFrame> frames;
      frames.reserve(range.length());
      for (std::size_t f = range.start; f < range.end; ++f) {
        frames.push_back(pose_feature(pose_frames[f], manifest.image_width, manifest.image_height));
      }
      pose = pool_pose(frames);
    }
    bag.segments.push_back(fuse(appearance, pose, mode, manifest.feature_dim));
  }

  if (rec->segment_labels) {
    if (rec->segment_labels->size() != bag.segments.size()) {
      throw Error(ErrorCode::InconsistentDimension,
                  "video " + rec->id + " has " + std::to_string(rec->segment_labels->size()) +
                      " segment labels for " + std::to_string(bag.segments.size()) + " segments");
    }
    bag.segment_labels = rec->segment_labels;
  }
  return bag;
}

std::vector<VideoBag> load_split(const Manifest& manifest, Split split, FusionMode mode) {
  std::vector<VideoBag> bags;
  for (const auto& rec : manifest.videos) {
    if (rec.split == split) bags.push_back(load_video_bag(manifest, rec.id, mode));
  }
  return bags;
}

}  // namespace ptde
