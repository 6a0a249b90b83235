#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

struct TaxonomyLimits {
  std::size_t attributes = kAttributeCount;
  std::size_t types = kAttributeTypeCount;
};

// Taxonomy file: {"types": [...], "attributes": [{id, name, synonyms, type,
// exclusivity, subtype?, antonym_of?, color_count?}], "feasibility": {...}}.
AttributeTaxonomy parse_taxonomy(std::string_view json_text,
                                 TaxonomyLimits limits = {});
AttributeTaxonomy load_taxonomy(const std::filesystem::path& path,
                                TaxonomyLimits limits = {});
std::string serialize_taxonomy(const AttributeTaxonomy& taxonomy);

/// Checks every structural invariant; throws DataError on the first failure.
void check_taxonomy(const AttributeTaxonomy& taxonomy, TaxonomyLimits limits = {});

// Category file: [{id, name, synonyms, split, group}].
std::vector<ObjectCategory> parse_categories(std::string_view json_text,
                                             bool require_full_set = true);
std::vector<ObjectCategory> load_categories(const std::filesystem::path& path,
                                            bool require_full_set = true);

/// Loads an annotation file. Boxes past the image border are clamped and a
/// warning is appended. Structural problems that validate_dataset reports
/// (label length, degenerate boxes, unknown categories) do not throw here.
Dataset parse_dataset(std::string_view json_text,
                      std::vector<ObjectCategory> categories,
                      std::shared_ptr<const AttributeTaxonomy> taxonomy,
                      std::vector<std::string>* warnings = nullptr);
Dataset load_dataset(const std::filesystem::path& path,
                     std::vector<ObjectCategory> categories,
                     std::shared_ptr<const AttributeTaxonomy> taxonomy,
                     std::vector<std::string>* warnings = nullptr);

// Prediction file: [{image_id, predictions: [{bbox, object_scores,
// attribute_scores}]}].
Predictions parse_predictions(std::string_view json_text,
                              std::size_t category_count,
                              std::size_t attribute_count);
Predictions load_predictions(const std::filesystem::path& path,
                             std::size_t category_count,
                             std::size_t attribute_count);

// Box-oracle file: [{image_id, instance_index, attribute_scores}].
OracleScores parse_oracle_scores(std::string_view json_text,
                                 std::size_t attribute_count);
OracleScores load_oracle_scores(const std::filesystem::path& path,
                                std::size_t attribute_count);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ovad
