#include "ptde/pose.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ptde/error.hpp"

namespace ptde {

namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedPoseFile, what);
}

double read_number(const json& value, std::size_t frame, std::size_t person, std::size_t joint) {
  if (!value.is_number()) {
    malformed("frame " + std::to_string(frame) + " person " + std::to_string(person) + " joint " +
              std::to_string(joint) + ": expected a number");
  }
  const double out = value.get<double>();
  if (!std::isfinite(out)) malformed("non-finite keypoint value");
  return out;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::array<double, defaults::kPoseFeatureDim> PoseFrame::flatten() const {
  std::array<double, defaults::kPoseFeatureDim> out{};
  for (std::size_t j = 0; j < joints.size(); ++j) {
    out[3 * j] = joints[j].x;
    out[3 * j + 1] = joints[j].y;
    out[3 * j + 2] = joints[j].confidence;
  }
  return out;
}

std::vector<FrameCandidates> parse_pose_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_array()) malformed("top level must be an array of frames");

  std::vector<FrameCandidates> frames;
  frames.reserve(doc.size());
  for (std::size_t f = 0; f < doc.size(); ++f) {
    const json& frame = doc[f];
    if (!frame.is_array()) malformed("frame " + std::to_string(f) + " is not an array of persons");
    FrameCandidates candidates;
    candidates.reserve(frame.size());
    for (std::size_t p = 0; p < frame.size(); ++p) {
      const json& person = frame[p];
      if (!person.is_array() || person.size() != defaults::kPoseJoints) {
        malformed("frame " + std::to_string(f) + " person " + std::to_string(p) + " has " +
                  (person.is_array() ? std::to_string(person.size()) : std::string("no")) +
                  " joints, expected 18");
      }
      PersonKeypoints kp{};
      for (std::size_t j = 0; j < defaults::kPoseJoints; ++j) {
        const json& triple = person[j];
        if (!triple.is_array() || triple.size() != 3) {
          malformed("frame " + std::to_string(f) + " person " + std::to_string(p) + " joint " +
                    std::to_string(j) + " is not an [x, y, confidence] triple");
        }
        kp[j] = {read_number(triple[0], f, p, j), read_number(triple[1], f, p, j),
                 read_number(triple[2], f, p, j)};
      }
      candidates.push_back(kp);
    }
    frames.push_back(std::move(candidates));
  }
  return frames;
}

std::vector<FrameCandidates> read_pose_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open pose file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pose_document(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string write_pose_document(std::span<const FrameCandidates> frames) {
  json doc = json::array();
  for (const auto& frame : frames) {
    json persons = json::array();
    for (const auto& person : frame) {
      json joints = json::array();
      for (const auto& kp : person) joints.push_back({kp.x, kp.y, kp.confidence});
      persons.push_back(std::move(joints));
    }
    doc.push_back(std::move(persons));
  }
  return doc.dump();
}

PoseFrame pose_feature(const FrameCandidates& candidates, std::size_t image_width,
                       std::size_t image_height) {
  if (image_width == 0 || image_height == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  PoseFrame frame;
  if (candidates.empty()) return frame;

  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t p = 0; p < candidates.size(); ++p) {
    double sum = 0.0;
    for (const auto& kp : candidates[p]) sum += kp.confidence;
    const double mean = sum / static_cast<double>(defaults::kPoseJoints);
    if (mean > best_mean) {
      best_mean = mean;
      best = p;
    }
  }

  const double w = static_cast<double>(image_width);
  const double h = static_cast<double>(image_height);
  for (std::size_t j = 0; j < defaults::kPoseJoints; ++j) {
    const Keypoint& kp = candidates[best][j];
    frame.joints[j] = {clamp_unit(kp.x / w), clamp_unit(kp.y / h), clamp_unit(kp.confidence)};
  }
  frame.person_present = true;
  return frame;
}

PoseSegmentFeature pool_pose(std::span<const PoseFrame> frames) {
  if (frames.empty()) throw Error(ErrorCode::EmptySegment, "no pose frames in segment");
  PoseSegmentFeature out;
  for (const auto& frame : frames) {
    const auto flat = frame.flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) out.values[i] += flat[i];
  }
  const double count = static_cast<double>(frames.size());
  for (double& v : out.values) v /= count;
  return out;
}

}  // namespace ptde
