#pragma once

#include <cstdint>
#include <filesystem>

#include "ptde/scoring_head.hpp"
#include "ptde/trainer.hpp"

namespace ptde {

// Checkpoint layout, little-endian throughout:
//
//   "PTDE"            magic
//   u32               format version
//   u32               input_dim
//   u32               layer count (3)
//   u32 x 3           layer widths (512, 32, 1)
//   u64               seed
//   u32               fusion mode tag (0 = global, 1 = global-local)
//   f64 x 4           learning_rate, lambda1, lambda2, adagrad_epsilon
//   u64 x 2           epochs, pairs_per_epoch
//   f64 x N           W1, b1, W2, b2, W3, b3 (weights inputs x outputs, row-major)
//
// The file must end exactly after the last parameter.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ScoringHead head;
  TrainConfig config;
};

void save_checkpoint(const ScoringHead& head, const TrainConfig& config,
                     const std::filesystem::path& path);

/// Throws UnsupportedVersion for other format versions and CorruptCheckpoint
/// for bad magic, unexpected shapes, truncation, trailing bytes or
/// non-finite parameters.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ptde
