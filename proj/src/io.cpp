#include "ovad/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace ovad {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T get_field(const json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw DataError(std::string(what) + ": missing key '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string(what) + ": bad value for '" + key + "': " + e.what());
  }
}

BoundingBox parse_bbox(const json& j, std::string_view what) {
  auto v = get_field<std::vector<double>>(j, "bbox", what);
  if (v.size() != 4) throw DataError(std::string(what) + ": bbox must have 4 numbers");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<double> parse_scores(const json& j, const char* key, std::size_t expected,
                                 std::string_view what) {
  auto v = get_field<std::vector<double>>(j, key, what);
  if (v.size() != expected) {
    throw DataError(std::string(what) + ": '" + key + "' has " + std::to_string(v.size()) +
                    " entries, expected " + std::to_string(expected));
  }
  for (double s : v) {
    if (!std::isfinite(s)) throw DataError(std::string(what) + ": non-finite score");
  }
  return v;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_taxonomy(const AttributeTaxonomy& t, TaxonomyLimits limits) {
  if (t.attributes.size() != limits.attributes) {
    throw DataError("taxonomy has " + std::to_string(t.attributes.size()) +
                    " attributes, expected " + std::to_string(limits.attributes));
  }
  if (t.types.size() != limits.types) {
    throw DataError("taxonomy has " + std::to_string(t.types.size()) +
                    " attribute types, expected " + std::to_string(limits.types));
  }
  std::set<std::string> types(t.types.begin(), t.types.end());
  if (types.size() != t.types.size()) throw DataError("duplicate attribute type name");

  std::set<std::string> names;
  for (std::size_t i = 0; i < t.attributes.size(); ++i) {
    const auto& a = t.attributes[i];
    if (a.id != i) {
      throw DataError("attribute '" + a.name + "' has id " + std::to_string(a.id) +
                      " but sits at position " + std::to_string(i));
    }
    if (!names.insert(a.name).second) throw DataError("duplicate attribute name '" + a.name + "'");
    if (a.synonyms.empty()) throw DataError("attribute '" + a.name + "' has no synonyms");
    if (!types.count(a.type)) {
      throw DataError("attribute '" + a.name + "' has unknown type '" + a.type + "'");
    }
    if (a.antonym_of) {
      if (a.exclusivity != Exclusivity::AntonymPairs) {
        throw DataError("attribute '" + a.name + "' declares an antonym but is not AntonymPairs");
      }
      const std::size_t other = *a.antonym_of;
      if (other >= t.attributes.size() || other == i ||
          t.attributes[other].antonym_of != i) {
        throw DataError("dangling antonym reference on '" + a.name + "'");
      }
    }
  }

  // Every member of a field shares one exclusivity kind.
  for (const auto& field : t.fields()) {
    auto ids = t.members(field);
    for (auto id : ids) {
      if (t.attributes[id].exclusivity != t.attributes[ids.front()].exclusivity) {
        throw DataError("mixed exclusivity inside field '" + field + "'");
      }
    }
  }

  const std::set<CategoryGroup> expected_groups = {CategoryGroup::Human, CategoryGroup::Animal,
                                                   CategoryGroup::Food, CategoryGroup::Object};
  std::set<CategoryGroup> groups;
  for (const auto& [g, _] : t.feasibility) groups.insert(g);
  if (groups != expected_groups) {
    throw DataError("feasibility keys must be exactly human, animal, food, object");
  }
  const auto fields = t.fields();
  for (const auto& [g, allowed] : t.feasibility) {
    for (const auto& f : allowed) {
      if (!types.count(f) && std::find(fields.begin(), fields.end(), f) == fields.end()) {
        throw DataError("feasibility for '" + std::string(to_string(g)) +
                        "' names unknown type '" + f + "'");
      }
    }
  }
}

AttributeTaxonomy parse_taxonomy(std::string_view json_text, TaxonomyLimits limits) {
  const json root = parse_json(json_text, "taxonomy");
  if (!root.is_object()) throw DataError("taxonomy: top level must be an object");
  AttributeTaxonomy t;
  t.types = get_field<std::vector<std::string>>(root, "types", "taxonomy");

  const auto& attrs = root.find("attributes");
  if (attrs == root.end() || !attrs->is_array()) {
    throw DataError("taxonomy: 'attributes' must be a list");
  }
  for (const auto& ja : *attrs) {
    AttributeDef a;
    a.id = get_field<std::size_t>(ja, "id", "taxonomy attribute");
    a.name = get_field<std::string>(ja, "name", "taxonomy attribute");
    a.synonyms = get_field<std::vector<std::string>>(ja, "synonyms", "taxonomy attribute");
    a.type = get_field<std::string>(ja, "type", "taxonomy attribute");
    a.exclusivity =
        parse_exclusivity(get_field<std::string>(ja, "exclusivity", "taxonomy attribute"));
    if (ja.contains("subtype")) a.subtype = get_field<std::string>(ja, "subtype", a.name);
    if (ja.contains("antonym_of") && !ja["antonym_of"].is_null()) {
      a.antonym_of = get_field<std::size_t>(ja, "antonym_of", a.name);
    }
    if (ja.contains("color_count") && !ja["color_count"].is_null()) {
      a.color_count = get_field<int>(ja, "color_count", a.name);
    }
    t.attributes.push_back(std::move(a));
  }

  const auto& feas = root.find("feasibility");
  if (feas == root.end() || !feas->is_object()) {
    throw DataError("taxonomy: 'feasibility' must be an object");
  }
  for (const auto& [key, value] : feas->items()) {
    auto list = value.get<std::vector<std::string>>();
    t.feasibility[parse_category_group(key)] = {list.begin(), list.end()};
  }

  check_taxonomy(t, limits);
  return t;
}

AttributeTaxonomy load_taxonomy(const std::filesystem::path& path, TaxonomyLimits limits) {
  return parse_taxonomy(read_text_file(path), limits);
}

std::string serialize_taxonomy(const AttributeTaxonomy& t) {
  json root;
  root["types"] = t.types;
  json attrs = json::array();
  for (const auto& a : t.attributes) {
    json ja = {{"id", a.id},
               {"name", a.name},
               {"synonyms", a.synonyms},
               {"type", a.type},
               {"exclusivity", std::string(to_string(a.exclusivity))}};
    if (!a.subtype.empty()) ja["subtype"] = a.subtype;
    if (a.antonym_of) ja["antonym_of"] = *a.antonym_of;
    if (a.color_count) ja["color_count"] = *a.color_count;
    attrs.push_back(std::move(ja));
  }
  root["attributes"] = std::move(attrs);
  json feas = json::object();
  for (const auto& [g, allowed] : t.feasibility) {
    feas[std::string(to_string(g))] = std::vector<std::string>(allowed.begin(), allowed.end());
  }
  root["feasibility"] = std::move(feas);
  return root.dump(1);
}

std::vector<ObjectCategory> parse_categories(std::string_view json_text, bool require_full_set) {
  const json root = parse_json(json_text, "categories");
  if (!root.is_array()) throw DataError("categories: top level must be a list");
  std::vector<ObjectCategory> out;
  std::set<CategoryId> ids;
  for (const auto& jc : root) {
    ObjectCategory c;
    c.id = get_field<CategoryId>(jc, "id", "category");
    c.name = get_field<std::string>(jc, "name", "category");
    c.synonyms = jc.contains("synonyms")
                     ? get_field<std::vector<std::string>>(jc, "synonyms", c.name)
                     : std::vector<std::string>{c.name};
    c.split = parse_split(get_field<std::string>(jc, "split", c.name));
    c.group = parse_category_group(get_field<std::string>(jc, "group", c.name));
    if (!ids.insert(c.id).second) throw DataError("duplicate category id " + std::to_string(c.id));
    if (c.synonyms.empty()) throw DataError("category '" + c.name + "' has no synonyms");
    out.push_back(std::move(c));
  }
  if (require_full_set) {
    const auto novel = std::count_if(out.begin(), out.end(),
                                     [](const auto& c) { return c.split == Split::Novel; });
    if (out.size() != kCategoryCount || static_cast<std::size_t>(novel) != kNovelCategoryCount) {
      throw DataError("categories: expected 80 categories (48 Base + 32 Novel), got " +
                      std::to_string(out.size()) + " with " + std::to_string(novel) + " Novel");
    }
  }
  return out;
}

std::vector<ObjectCategory> load_categories(const std::filesystem::path& path,
                                            bool require_full_set) {
  return parse_categories(read_text_file(path), require_full_set);
}

Dataset parse_dataset(std::string_view json_text, std::vector<ObjectCategory> categories,
                      std::shared_ptr<const AttributeTaxonomy> taxonomy,
                      std::vector<std::string>* warnings) {
  const json root = parse_json(json_text, "annotations");
  if (!root.is_object()) throw DataError("annotations: top level must be an object");

  Dataset d;
  d.categories = std::move(categories);
  d.taxonomy = std::move(taxonomy);

  const auto images = root.find("images");
  if (images == root.end() || !images->is_array()) {
    throw DataError("annotations: 'images' must be a list");
  }
  std::unordered_map<ImageId, std::size_t> slot;
  for (const auto& ji : *images) {
    AnnotatedImage img;
    img.id = get_field<ImageId>(ji, "id", "image");
    img.width = get_field<double>(ji, "width", "image");
    img.height = get_field<double>(ji, "height", "image");
    if (!slot.emplace(img.id, d.images.size()).second) {
      throw DataError("duplicate image id " + std::to_string(img.id));
    }
    d.images.push_back(std::move(img));
  }

  auto instances = root.find("instances");
  if (instances == root.end()) instances = root.find("annotations");
  std::optional<std::size_t> first_len;
  if (instances != root.end()) {
    if (!instances->is_array()) throw DataError("annotations: 'instances' must be a list");
    for (const auto& jn : *instances) {
      const auto image_id = get_field<ImageId>(jn, "image_id", "instance");
      auto it = slot.find(image_id);
      if (it == slot.end()) {
        throw DataError("instance references unknown image " + std::to_string(image_id));
      }
      auto& img = d.images[it->second];
      AnnotatedInstance inst;
      inst.category = get_field<CategoryId>(jn, "category_id", "instance");
      inst.box = parse_bbox(jn, "instance");
      if (inst.box.is_valid() && !inst.box.within(img.width, img.height)) {
        inst.box = inst.box.clamped_to(img.width, img.height);
        if (warnings) {
          warnings->push_back("image " + std::to_string(img.id) + " instance " +
                              std::to_string(img.instances.size()) +
                              ": box clamped to image bounds");
        }
      }
      for (long long v : get_field<std::vector<long long>>(jn, "att_vec", "instance")) {
        inst.labels.push_back(tristate_from_int(v));
      }
      if (!first_len) first_len = inst.labels.size();
      img.instances.push_back(std::move(inst));
    }
  }

  if (d.taxonomy) {
    d.attribute_count = d.taxonomy->size();
  } else if (first_len) {
    d.attribute_count = *first_len;
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, std::vector<ObjectCategory> categories,
                     std::shared_ptr<const AttributeTaxonomy> taxonomy,
                     std::vector<std::string>* warnings) {
  return parse_dataset(read_text_file(path), std::move(categories), std::move(taxonomy),
                       warnings);
}

Predictions parse_predictions(std::string_view json_text, std::size_t category_count,
                              std::size_t attribute_count) {
  const json root = parse_json(json_text, "predictions");
  if (!root.is_array()) throw DataError("predictions: top level must be a list");
  Predictions out;
  for (const auto& je : root) {
    const auto image_id = get_field<ImageId>(je, "image_id", "prediction entry");
    auto& list = out[image_id];
    const auto preds = je.find("predictions");
    if (preds == je.end() || !preds->is_array()) {
      throw DataError("prediction entry: 'predictions' must be a list");
    }
    for (const auto& jp : *preds) {
      PredictedInstance p;
      p.box = parse_bbox(jp, "prediction");
      if (!p.box.is_valid()) {
        throw DataError("image " + std::to_string(image_id) + ": degenerate prediction box");
      }
      p.object_scores = parse_scores(jp, "object_scores", category_count, "prediction");
      p.attribute_scores = parse_scores(jp, "attribute_scores", attribute_count, "prediction");
      list.push_back(std::move(p));
    }
  }
  return out;
}

Predictions load_predictions(const std::filesystem::path& path, std::size_t category_count,
                             std::size_t attribute_count) {
  return parse_predictions(read_text_file(path), category_count, attribute_count);
}

OracleScores parse_oracle_scores(std::string_view json_text, std::size_t attribute_count) {
  const json root = parse_json(json_text, "box-oracle scores");
  if (!root.is_array()) throw DataError("box-oracle scores: top level must be a list");
  OracleScores out;
  for (const auto& je : root) {
    InstanceKey key{get_field<ImageId>(je, "image_id", "box-oracle entry"),
                    get_field<std::size_t>(je, "instance_index", "box-oracle entry")};
    auto scores = parse_scores(je, "attribute_scores", attribute_count, "box-oracle entry");
    if (!out.emplace(key, std::move(scores)).second) {
      throw DataError("duplicate box-oracle entry for image " + std::to_string(key.image_id) +
                      " instance " + std::to_string(key.instance_index));
    }
  }
  return out;
}

OracleScores load_oracle_scores(const std::filesystem::path& path, std::size_t attribute_count) {
  return parse_oracle_scores(read_text_file(path), attribute_count);
}

}  // namespace ovad
