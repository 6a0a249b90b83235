#include "ovad/core_types.hpp"

#include <algorithm>
#include <string>

namespace ovad {

BoundingBox BoundingBox::clamped_to(double width, double height) const {
  const double x0 = std::clamp(x, 0.0, width);
  const double y0 = std::clamp(y, 0.0, height);
  const double x1 = std::clamp(right(), 0.0, width);
  const double y1 = std::clamp(bottom(), 0.0, height);
  return {x0, y0, x1 - x0, y1 - y0};
}

TriState tristate_from_int(long long v) {
  switch (v) {
    case 1: return TriState::Positive;
    case 0: return TriState::Negative;
    case -1: return TriState::Unknown;
    default:
      throw DataError("attribute label must be 1, 0 or -1, got " + std::to_string(v));
  }
}

std::string_view to_string(Exclusivity e) {
  switch (e) {
    case Exclusivity::Exclusive: return "Exclusive";
    case Exclusivity::ColorMultiSelect: return "ColorMultiSelect";
    case Exclusivity::AntonymPairs: return "AntonymPairs";
  }
  return "Exclusive";
}

Exclusivity parse_exclusivity(std::string_view s) {
  if (s == "Exclusive") return Exclusivity::Exclusive;
  if (s == "ColorMultiSelect") return Exclusivity::ColorMultiSelect;
  if (s == "AntonymPairs") return Exclusivity::AntonymPairs;
  throw DataError("unknown exclusivity '" + std::string(s) + "'");
}

std::string_view to_string(CategoryGroup g) {
  switch (g) {
    case CategoryGroup::Human: return "human";
    case CategoryGroup::Animal: return "animal";
    case CategoryGroup::Food: return "food";
    case CategoryGroup::Object: return "object";
  }
  return "object";
}

CategoryGroup parse_category_group(std::string_view s) {
  if (s == "human") return CategoryGroup::Human;
  if (s == "animal") return CategoryGroup::Animal;
  if (s == "food") return CategoryGroup::Food;
  if (s == "object") return CategoryGroup::Object;
  throw DataError("unknown object-category group '" + std::string(s) + "'");
}

std::string_view to_string(Split s) {
  return s == Split::Base ? "Base" : "Novel";
}

Split parse_split(std::string_view s) {
  if (s == "Base" || s == "base") return Split::Base;
  if (s == "Novel" || s == "novel") return Split::Novel;
  throw DataError("unknown category split '" + std::string(s) + "'");
}

std::vector<std::string> AttributeTaxonomy::fields() const {
  std::vector<std::string> out;
  for (const auto& a : attributes) {
    if (std::find(out.begin(), out.end(), a.field()) == out.end()) {
      out.push_back(a.field());
    }
  }
  return out;
}

std::vector<std::size_t> AttributeTaxonomy::members(std::string_view field) const {
  std::vector<std::size_t> out;
  for (const auto& a : attributes) {
    if (a.field() == field) out.push_back(a.id);
  }
  return out;
}

std::optional<std::size_t> AttributeTaxonomy::find(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return a.id;
  }
  return std::nullopt;
}

std::size_t Dataset::instance_count() const {
  std::size_t n = 0;
  for (const auto& img : images) n += img.instances.size();
  return n;
}

std::optional<std::size_t> Dataset::category_index(CategoryId id) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i].id == id) return i;
  }
  return std::nullopt;
}

std::string Dataset::attribute_name(std::size_t id) const {
  if (taxonomy && id < taxonomy->size()) return taxonomy->attributes[id].name;
  return "attr_" + std::to_string(id);
}

}  // namespace ovad
