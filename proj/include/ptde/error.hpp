#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptde {

enum class ErrorCode {
  EmptyVideo,
  NonFiniteInput,
  EmptySegment,
  DimensionMismatch,
  MalformedPoseFile,
  MissingPose,
  EmptyBag,
  NegativeLambda,
  EmptyBatch,
  ShapeMismatch,
  InsufficientData,
  NonFiniteLoss,
  DegenerateLabels,
  LengthMismatch,
  ManifestSyntax,
  MissingFeatureFile,
  InconsistentDimension,
  BadCategory,
  UnknownVideo,
  CorruptFeatureFile,
  UnsupportedVersion,
  CorruptCheckpoint,
  InvalidArgument,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyVideo: return "EmptyVideo";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MalformedPoseFile: return "MalformedPoseFile";
    case ErrorCode::MissingPose: return "MissingPose";
    case ErrorCode::EmptyBag: return "EmptyBag";
    case ErrorCode::NegativeLambda: return "NegativeLambda";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ManifestSyntax: return "ManifestSyntax";
    case ErrorCode::MissingFeatureFile: return "MissingFeatureFile";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::BadCategory: return "BadCategory";
    case ErrorCode::UnknownVideo: return "UnknownVideo";
    case ErrorCode::CorruptFeatureFile: return "CorruptFeatureFile";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ptde
