#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ovad {

inline constexpr std::size_t kAttributeCount = 117;
inline constexpr std::size_t kAttributeTypeCount = 19;
inline constexpr std::size_t kCategoryCount = 80;
inline constexpr std::size_t kBaseCategoryCount = 48;
inline constexpr std::size_t kNovelCategoryCount = 32;

using ImageId = std::int64_t;
using CategoryId = std::int64_t;

/// Raised for malformed or inconsistent input data (files, records, ids).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box in pixels, (x, y) is the top-left corner.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }

  bool is_valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
           std::isfinite(h) && w > 0.0 && h > 0.0;
  }

  // Tolerates rounding left behind by clamped_to.
  bool within(double width, double height) const {
    constexpr double kSlack = 1e-6;
    return x >= -kSlack && y >= -kSlack && right() <= width + kSlack &&
           bottom() <= height + kSlack;
  }

  /// Intersection with [0,width]x[0,height]; may come out degenerate.
  BoundingBox clamped_to(double width, double height) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class TriState : std::int8_t { Negative = 0, Positive = 1, Unknown = -1 };

/// Maps the file encoding (1, 0, -1) to a label; throws DataError otherwise.
TriState tristate_from_int(long long v);
inline int to_int(TriState s) { return static_cast<int>(s); }

enum class Exclusivity { Exclusive, ColorMultiSelect, AntonymPairs };

std::string_view to_string(Exclusivity e);
Exclusivity parse_exclusivity(std::string_view s);

enum class CategoryGroup { Human, Animal, Food, Object };

std::string_view to_string(CategoryGroup g);
CategoryGroup parse_category_group(std::string_view s);

enum class Split { Base, Novel };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct AttributeDef {
  std::size_t id = 0;
  std::string name;
  std::vector<std::string> synonyms;
  std::string type;
  // Human-specific annotation field sharing a type (e.g. "hair color"
  // under "color"). Empty when the attribute is annotated under its type.
  std::string subtype;
  Exclusivity exclusivity = Exclusivity::Exclusive;
  std::optional<std::size_t> antonym_of;
  // Number of colours a color-quantity attribute pins down (1 or 2).
  std::optional<int> color_count;

  /// The annotation field the attribute is selected under.
  const std::string& field() const { return subtype.empty() ? type : subtype; }

  friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

struct AttributeTaxonomy {
  std::vector<AttributeDef> attributes;
  std::vector<std::string> types;
  std::map<CategoryGroup, std::set<std::string>> feasibility;

  std::size_t size() const { return attributes.size(); }

  /// Annotation fields in order of first appearance.
  std::vector<std::string> fields() const;
  /// Attribute ids selected under `field`, ascending.
  std::vector<std::size_t> members(std::string_view field) const;
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const AttributeTaxonomy&,
                         const AttributeTaxonomy&) = default;
};

struct ObjectCategory {
  CategoryId id = 0;
  std::string name;
  std::vector<std::string> synonyms;
  Split split = Split::Base;
  CategoryGroup group = CategoryGroup::Object;

  friend bool operator==(const ObjectCategory&, const ObjectCategory&) = default;
};

struct AnnotatedInstance {
  BoundingBox box;
  CategoryId category = 0;
  std::vector<TriState> labels;
};

struct AnnotatedImage {
  ImageId id = 0;
  double width = 0.0;
  double height = 0.0;
  std::vector<AnnotatedInstance> instances;
};

struct Dataset {
  // Absent when evaluating against a bare annotation file.
  std::shared_ptr<const AttributeTaxonomy> taxonomy;
  std::size_t attribute_count = kAttributeCount;
  std::vector<ObjectCategory> categories;
  std::vector<AnnotatedImage> images;

  std::size_t instance_count() const;
  std::optional<std::size_t> category_index(CategoryId id) const;
  std::string attribute_name(std::size_t id) const;
};

struct PredictedInstance {
  BoundingBox box;
  std::vector<double> object_scores;     // indexed like Dataset::categories
  std::vector<double> attribute_scores;  // indexed by attribute id
};

using Predictions = std::map<ImageId, std::vector<PredictedInstance>>;

struct InstanceKey {
  ImageId image_id = 0;
  std::size_t instance_index = 0;
  friend auto operator<=>(const InstanceKey&, const InstanceKey&) = default;
};

/// Box-oracle attribute scores, one vector per ground-truth instance.
using OracleScores = std::map<InstanceKey, std::vector<double>>;

}  // namespace ovad
