#include "ptde/checkpoint.hpp"

#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "ptde/error.hpp"

namespace ptde {

namespace {

std::uint32_t fusion_tag(FusionMode mode) { return mode == FusionMode::GlobalOnly ? 0 : 1; }

[[noreturn]] void corrupt(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::CorruptCheckpoint, path.string() + ": " + what);
}

template <typename T>
T need(std::optional<T> v, const std::filesystem::path& path, std::size_t offset) {
  if (!v) corrupt(path, "truncated at byte offset " + std::to_string(offset));
  return *v;
}

}  // namespace

void save_checkpoint(const ScoringHead& head, const TrainConfig& config,
                     const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.put_bytes("PTDE");
  w.put_u32(kCheckpointVersion);
  w.put_u32(static_cast<std::uint32_t>(head.input_dim));
  w.put_u32(static_cast<std::uint32_t>(head.layers.size()));
  for (const auto& layer : head.layers) w.put_u32(static_cast<std::uint32_t>(layer.outputs));
  w.put_u64(config.seed);
  w.put_u32(fusion_tag(config.fusion_mode));
  w.put_f64(config.learning_rate);
  w.put_f64(config.lambda1);
  w.put_f64(config.lambda2);
  w.put_f64(config.adagrad_epsilon);
  w.put_u64(config.epochs);
  w.put_u64(config.pairs_per_epoch);
  for (const auto& block : head.blocks()) {
    for (double v : block) w.put_f64(v);
  }
  w.write_to(path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file_bytes(path, ErrorCode::IoFailure));

  const auto magic = r.get_bytes(4);
  if (!magic || *magic != "PTDE") corrupt(path, "bad magic, expected PTDE");
  const std::uint32_t version = need(r.get_u32(), path, r.offset());
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::UnsupportedVersion, path.string() + ": checkpoint version " +
                                                   std::to_string(version) + ", expected " +
                                                   std::to_string(kCheckpointVersion));
  }
  const std::uint32_t input_dim = need(r.get_u32(), path, r.offset());
  if (input_dim == 0) corrupt(path, "input dimension is zero");
  const std::uint32_t layer_count = need(r.get_u32(), path, r.offset());
  if (layer_count != kLayerWidths.size()) {
    corrupt(path, "expected 3 layers, found " + std::to_string(layer_count));
  }
  for (std::size_t l = 0; l < kLayerWidths.size(); ++l) {
    const std::uint32_t width = need(r.get_u32(), path, r.offset());
    if (width != kLayerWidths[l]) {
      corrupt(path, "layer " + std::to_string(l + 1) + " width " + std::to_string(width) +
                        ", expected " + std::to_string(kLayerWidths[l]));
    }
  }

  Checkpoint ck;
  ck.config.seed = need(r.get_u64(), path, r.offset());
  const std::uint32_t tag = need(r.get_u32(), path, r.offset());
  if (tag > 1) corrupt(path, "unknown fusion mode tag " + std::to_string(tag));
  ck.config.fusion_mode = tag == 0 ? FusionMode::GlobalOnly : FusionMode::GlobalLocalConcat;
  ck.config.learning_rate = need(r.get_f64(), path, r.offset());
  ck.config.lambda1 = need(r.get_f64(), path, r.offset());
  ck.config.lambda2 = need(r.get_f64(), path, r.offset());
  ck.config.adagrad_epsilon = need(r.get_f64(), path, r.offset());
  ck.config.epochs = need(r.get_u64(), path, r.offset());
  ck.config.pairs_per_epoch = need(r.get_u64(), path, r.offset());

  ScoringHead head(input_dim);
  const std::size_t expected = r.offset() + head.parameter_count() * sizeof(double);
  if (r.size() != expected) {
    corrupt(path, "size " + std::to_string(r.size()) + " bytes, expected " +
                      std::to_string(expected));
  }
  for (auto block : head.blocks()) {
    for (double& v : block) {
      v = need(r.get_f64(), path, r.offset());
      if (!std::isfinite(v)) corrupt(path, "non-finite parameter");
    }
  }
  ck.head = std::move(head);
  return ck;
}

}  // namespace ptde
