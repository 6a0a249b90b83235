#include "ovad/validate.hpp"

#include <set>

namespace ovad {

std::string Violation::to_string() const {
  std::string out;
  if (image_id) out += "image " + std::to_string(*image_id);
  if (instance_index) out += (out.empty() ? "" : " ") + std::string("instance ") +
                             std::to_string(*instance_index);
  if (!out.empty()) out += ": ";
  return out + message;
}

std::vector<Violation> validate_dataset(const Dataset& d) {
  std::vector<Violation> out;
  if (d.taxonomy && d.taxonomy->size() != d.attribute_count) {
    out.push_back({std::nullopt, std::nullopt,
                   "attribute count " + std::to_string(d.attribute_count) +
                       " disagrees with taxonomy size " + std::to_string(d.taxonomy->size())});
  }
  std::set<CategoryId> category_ids;
  for (const auto& c : d.categories) category_ids.insert(c.id);

  std::set<ImageId> seen;
  for (const auto& img : d.images) {
    if (!seen.insert(img.id).second) {
      out.push_back({img.id, std::nullopt, "duplicate image id"});
    }
    if (!(img.width > 0.0) || !(img.height > 0.0)) {
      out.push_back({img.id, std::nullopt, "image has non-positive size"});
    }
    for (std::size_t k = 0; k < img.instances.size(); ++k) {
      const auto& inst = img.instances[k];
      if (inst.labels.size() != d.attribute_count) {
        out.push_back({img.id, k,
                       "label vector has length " + std::to_string(inst.labels.size()) +
                           ", expected " + std::to_string(d.attribute_count)});
      }
      if (!inst.box.is_valid()) {
        out.push_back({img.id, k, "box is degenerate (w and h must be positive and finite)"});
      } else if (!inst.box.within(img.width, img.height)) {
        out.push_back({img.id, k, "box lies outside the image"});
      }
      if (!category_ids.count(inst.category)) {
        out.push_back({img.id, k, "unknown category id " + std::to_string(inst.category)});
      }
    }
  }
  return out;
}

}  // namespace ovad
