#include "ptde/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "ptde/dataset_io.hpp"
#include "ptde/error.hpp"
#include "ptde/metrics.hpp"
#include "ptde/pose.hpp"
#include "ptde/rng.hpp"
#include "ptde/segmenting.hpp"
#include "ptde/video_bag.hpp"

namespace fs = std::filesystem;

namespace ptde {

namespace {

constexpr std::array<Category, 4> kCategories = {Category::PackageTheft, Category::Pickup,
                                                 Category::Delivery, Category::Irrelevant};

// Neck-relative COCO-18 joint offsets in pixels for an upright person.
constexpr std::array<std::array<double, 2>, defaults::kPoseJoints> kSkeleton = {{
    {0, -15}, {0, 0},   {-15, 0}, {-20, 20}, {-22, 40}, {15, 0},   {20, 20},  {22, 40},  {-10, 45},
    {-11, 70}, {-12, 95}, {10, 45}, {11, 70}, {12, 95}, {-4, -19}, {4, -19}, {-8, -17}, {8, -17},
}};

// Keeps pose documents compact.
double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return l2_normalize(v);
}

struct Clusters {
  std::vector<double> normal_mean;
  std::vector<double> theft_mean;
};

// Both means sit at distance kBaseNorm * noise from the origin direction `b`;
// the theft mean is shifted by `separation` along a direction orthogonal to b.
Clusters make_clusters(const SynthSpec& spec, Rng& rng) {
  constexpr double kBaseNorm = 10.0;
  const auto base = random_unit(rng, spec.feature_dim);
  auto shift = random_unit(rng, spec.feature_dim);
  double dot = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) dot += base[i] * shift[i];
  for (std::size_t i = 0; i < base.size(); ++i) shift[i] -= dot * base[i];
  shift = l2_normalize(shift);

  Clusters c;
  c.normal_mean.resize(spec.feature_dim);
  c.theft_mean.resize(spec.feature_dim);
  for (std::size_t i = 0; i < spec.feature_dim; ++i) {
    c.normal_mean[i] = kBaseNorm * spec.noise * base[i];
    c.theft_mean[i] = c.normal_mean[i] + spec.separation * shift[i];
  }
  return c;
}

ClipFeature draw_clip(const std::vector<double>& mean, double noise, Rng& rng) {
  const double per_coord = noise / std::sqrt(static_cast<double>(mean.size()));
  ClipFeature clip;
  clip.values.resize(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) clip.values[i] = mean[i] + per_coord * rng.normal();
  return clip;
}

PersonKeypoints draw_person(double neck_x, double neck_y, Rng& rng) {
  PersonKeypoints kp{};
  for (std::size_t j = 0; j < defaults::kPoseJoints; ++j) {
    kp[j].x = round2(neck_x + kSkeleton[j][0] + rng.uniform(-3.0, 3.0));
    kp[j].y = round2(neck_y + kSkeleton[j][1] + rng.uniform(-3.0, 3.0));
    kp[j].confidence = round2(rng.uniform(0.3, 1.0));
  }
  return kp;
}

std::vector<FrameCandidates> draw_pose_track(std::size_t frames, const SynthSpec& spec, Rng& rng) {
  const double w = static_cast<double>(spec.image_width);
  const double h = static_cast<double>(spec.image_height);
  double x = rng.uniform(0.1 * w, 0.9 * w);
  double y = rng.uniform(0.1 * h, 0.6 * h);
  std::vector<FrameCandidates> track(frames);
  for (auto& frame : track) {
    x = std::clamp(x + rng.uniform(-2.0, 2.0), -0.1 * w, 1.1 * w);
    y = std::clamp(y + rng.uniform(-1.0, 1.0), -0.1 * h, 0.9 * h);
    const double u = rng.uniform();
    if (u < 0.05) continue;  // nobody detected
    frame.push_back(draw_person(x, y, rng));
    if (u > 0.9) frame.push_back(draw_person(rng.uniform(0.0, w), rng.uniform(0.0, h), rng));
  }
  return track;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.feature_dim == 0) throw Error(ErrorCode::InvalidArgument, "feature_dim must be positive");
  if (spec.segment_length == 0 || spec.segment_length % defaults::kClipLength != 0) {
    throw Error(ErrorCode::InvalidArgument, "segment_length must be a positive multiple of 16");
  }
  if (spec.min_segments == 0 || spec.max_segments < spec.min_segments) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= min_segments <= max_segments");
  }
  if (!std::isfinite(spec.separation) || spec.separation < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "separation must be finite and non-negative");
  }
  if (!std::isfinite(spec.noise) || spec.noise <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "noise must be finite and positive");
  }
  if (!(spec.theft_fraction > 0.0 && spec.theft_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theft_fraction must lie in (0, 1]");
  }
  for (const auto* counts : {&spec.train_counts, &spec.test_counts}) {
    const std::size_t normals = (*counts)[1] + (*counts)[2] + (*counts)[3];
    if ((*counts)[0] == 0 || normals == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "each split needs at least one theft and one normal video");
    }
  }
  if (spec.image_width == 0 || spec.image_height == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
}

fs::path generate_synthetic(const SynthSpec& spec, const fs::path& output_dir) {
  validate(spec);
  std::error_code ec;
  fs::create_directories(output_dir / "features", ec);
  if (!ec && spec.with_pose) fs::create_directories(output_dir / "pose", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + output_dir.string() + ": " + ec.message());

  Rng rng(spec.seed);
  const Clusters clusters = make_clusters(spec, rng);
  const std::vector<double> theft_direction = l2_normalize(clusters.theft_mean);
  const std::size_t clips_per_segment = spec.segment_length / defaults::kClipLength;

  nlohmann::ordered_json videos = nlohmann::ordered_json::array();
  std::vector<double> oracle_scores;
  std::vector<int> oracle_labels;

  for (const Split split : {Split::Train, Split::Test}) {
    const CategoryCounts& counts = split == Split::Train ? spec.train_counts : spec.test_counts;
    for (std::size_t c = 0; c < kCategories.size(); ++c) {
      const Category category = kCategories[c];
      for (std::size_t n = 0; n < counts[c]; ++n) {
        std::ostringstream id;
        id << to_string(split) << '-' << lower(to_string(category)) << '-' << std::setw(3)
           << std::setfill('0') << n;

        const std::size_t segments =
            spec.min_segments + rng.index(spec.max_segments - spec.min_segments + 1);
        std::vector<int> labels(segments, 0);
        if (category == Category::PackageTheft) {
          const auto block = std::clamp<std::size_t>(
              static_cast<std::size_t>(std::lround(spec.theft_fraction * static_cast<double>(segments))),
              1, segments);
          const std::size_t start = rng.index(segments - block + 1);
          std::fill(labels.begin() + static_cast<std::ptrdiff_t>(start),
                    labels.begin() + static_cast<std::ptrdiff_t>(start + block), 1);
        }

        // Half the videos carry a partial trailing segment that gets dropped.
        const std::size_t tail_clips = clips_per_segment > 1 && rng.uniform() < 0.5 ? 1 : 0;
        std::vector<ClipFeature> clips;
        clips.reserve(segments * clips_per_segment + tail_clips);
        for (std::size_t s = 0; s < segments; ++s) {
          const auto& mean = labels[s] ? clusters.theft_mean : clusters.normal_mean;
          for (std::size_t k = 0; k < clips_per_segment; ++k) {
            clips.push_back(draw_clip(mean, spec.noise, rng));
          }
        }
        for (std::size_t k = 0; k < tail_clips; ++k) {
          clips.push_back(draw_clip(clusters.normal_mean, spec.noise, rng));
        }

        const std::string feature_rel = "features/" + id.str() + ".ptdf";
        write_feature_file(output_dir / feature_rel, clips);

        nlohmann::ordered_json entry;
        entry["id"] = id.str();
        entry["split"] = std::string(to_string(split));
        entry["category"] = std::string(to_string(category));
        entry["features"] = feature_rel;
        if (spec.with_pose) {
          const std::string pose_rel = "pose/" + id.str() + ".json";
          const auto track = draw_pose_track(clips.size() * defaults::kClipLength, spec, rng);
          write_text(output_dir / pose_rel, write_pose_document(track));
          entry["pose"] = pose_rel;
        }
        entry["segment_labels"] = labels;
        videos.push_back(std::move(entry));

        if (split == Split::Test) {
          for (std::size_t s = 0; s < segments; ++s) {
            // Clips round-trip through float32 exactly as the loader will see them.
            std::vector<ClipFeature> stored(
                clips.begin() + static_cast<std::ptrdiff_t>(s * clips_per_segment),
                clips.begin() + static_cast<std::ptrdiff_t>((s + 1) * clips_per_segment));
            for (auto& clip : stored) {
              for (double& v : clip.values) v = static_cast<double>(static_cast<float>(v));
            }
            oracle_scores.push_back(-squared_distance(aggregate_segment(stored), theft_direction));
            oracle_labels.push_back(labels[s]);
          }
        }
      }
    }
  }

  nlohmann::ordered_json manifest;
  manifest["dataset"] = spec.dataset_name;
  manifest["feature_dim"] = spec.feature_dim;
  manifest["clip_length"] = defaults::kClipLength;
  manifest["segment_length"] = spec.segment_length;
  manifest["image_width"] = spec.image_width;
  manifest["image_height"] = spec.image_height;
  manifest["metadata"] = {
      {"generator", "ptde-synth"},
      {"seed", spec.seed},
      {"separation", spec.separation},
      {"noise", spec.noise},
      {"theft_fraction", spec.theft_fraction},
      {"nearest_mean_test_auc", auc(oracle_scores, oracle_labels)},
  };
  manifest["videos"] = std::move(videos);

  const fs::path manifest_path = output_dir / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

}  // namespace ptde
