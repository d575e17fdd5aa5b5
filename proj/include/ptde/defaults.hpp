#pragma once

#include <cstddef>

// Reference hyperparameters of the package-theft scoring pipeline.
namespace ptde::defaults {

inline constexpr double kLearningRate = 0.01;
inline constexpr std::size_t kEpochs = 5000;
inline constexpr double kLambdaSmoothness = 8e-5;
inline constexpr double kLambdaSparsity = 8e-5;
inline constexpr double kDetectionThreshold = 0.2;

inline constexpr std::size_t kHidden1 = 512;
inline constexpr std::size_t kHidden2 = 32;
inline constexpr std::size_t kOutput = 1;

inline constexpr std::size_t kPoseJoints = 18;
inline constexpr std::size_t kPoseChannels = 3;  // x, y, confidence
inline constexpr std::size_t kPoseFeatureDim = kPoseJoints * kPoseChannels;

inline constexpr std::size_t kClipLength = 16;
inline constexpr std::size_t kAppearanceDim = 4096;

inline constexpr std::size_t kPairsPerEpoch = 30;
inline constexpr double kAdagradEpsilon = 1e-8;

inline constexpr std::size_t kImageWidth = 320;
inline constexpr std::size_t kImageHeight = 240;

}  // namespace ptde::defaults
