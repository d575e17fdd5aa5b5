#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptde/segmenting.hpp"

namespace ptde {

enum class Category { PackageTheft, Pickup, Delivery, Irrelevant };

std::string_view to_string(Category category);
std::optional<Category> parse_category(std::string_view text);

/// A video as a MIL bag: its segments in temporal order. Positive iff the
/// category is PackageTheft.
struct VideoBag {
  std::string video_id;
  std::vector<SegmentEmbedding> segments;
  Category category = Category::Irrelevant;
  std::optional<std::vector<int>> segment_labels;

  bool positive() const { return category == Category::PackageTheft; }
  std::size_t dimension() const { return segments.empty() ? 0 : segments.front().values.size(); }
};

}  // namespace ptde
