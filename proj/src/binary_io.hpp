#pragma once

// Little-endian encode/decode helpers shared by the PTDF and checkpoint formats.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptde/error.hpp"

namespace ptde::detail {

class ByteWriter {
 public:
  void put_u32(std::uint32_t v) { put_le(v, 4); }
  void put_u64(std::uint64_t v) { put_le(v, 8); }
  void put_f32(float v) { put_u32(std::bit_cast<std::uint32_t>(v)); }
  void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }
  void put_bytes(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

  const std::vector<char>& bytes() const { return bytes_; }

  void write_to(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
  }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  std::vector<char> bytes_;
};

/// Cursor over an in-memory file. Reads return nullopt past the end so the
/// caller can report the offset with its own error code.
class ByteReader {
 public:
  explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  std::size_t offset() const { return pos_; }
  std::size_t size() const { return bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::optional<std::string> get_bytes(std::size_t n) {
    if (remaining() < n) return std::nullopt;
    std::string out(bytes_.data() + pos_, n);
    pos_ += n;
    return out;
  }
  std::optional<std::uint32_t> get_u32() {
    auto v = get_le(4);
    if (!v) return std::nullopt;
    return static_cast<std::uint32_t>(*v);
  }
  std::optional<std::uint64_t> get_u64() { return get_le(8); }
  std::optional<float> get_f32() {
    auto v = get_u32();
    if (!v) return std::nullopt;
    return std::bit_cast<float>(*v);
  }
  std::optional<double> get_f64() {
    auto v = get_u64();
    if (!v) return std::nullopt;
    return std::bit_cast<double>(*v);
  }

 private:
  std::optional<std::uint64_t> get_le(int n) {
    if (remaining() < static_cast<std::size_t>(n)) return std::nullopt;
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

/// Reads at most `limit` bytes (whole file when limit is nullopt).
inline std::vector<char> read_file_bytes(const std::filesystem::path& path, ErrorCode missing,
                                         std::optional<std::size_t> limit = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing, "cannot open " + path.string());
  if (limit) {
    std::vector<char> out(*limit);
    in.read(out.data(), static_cast<std::streamsize>(*limit));
    out.resize(static_cast<std::size_t>(in.gcount()));
    return out;
  }
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace ptde::detail
