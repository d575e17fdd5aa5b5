#include "ptde/video_bag.hpp"

namespace ptde {

std::string_view to_string(Category category) {
  switch (category) {
    case Category::PackageTheft: return "PackageTheft";
    case Category::Pickup: return "Pickup";
    case Category::Delivery: return "Delivery";
    case Category::Irrelevant: return "Irrelevant";
  }
  return "Unknown";
}

std::optional<Category> parse_category(std::string_view text) {
  if (text == "PackageTheft") return Category::PackageTheft;
  if (text == "Pickup") return Category::Pickup;
  if (text == "Delivery") return Category::Delivery;
  if (text == "Irrelevant") return Category::Irrelevant;
  return std::nullopt;
}

}  // namespace ptde
