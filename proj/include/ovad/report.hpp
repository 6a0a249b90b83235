#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ovad/core_types.hpp"
#include "ovad/metrics.hpp"

namespace ovad {

inline constexpr int kReportSchemaVersion = 1;

/// Mean AP per attribute type (over attributes with a defined AP).
std::vector<std::pair<std::string, std::optional<double>>> per_type_means(
    const EvalReport& report, const AttributeTaxonomy& taxonomy);

// Tables print percentages (x100, one decimal); JSON and CSV keep the raw
// [0, 1] values at full precision.
std::string render_table(const EvalReport& report);
std::string report_json(const EvalReport& report, const Dataset& d);
std::string report_csv(const EvalReport& report, const Dataset& d);

/// Figures published for the OVAD release, used only for side-by-side notes.
struct ReleaseReference {
  static constexpr std::size_t images = 2000;
  static constexpr std::size_t instances = 14300;
  static constexpr std::size_t positives = 122998;
  static constexpr std::size_t negatives = 1278486;
  static constexpr std::size_t unknowns = 172760;
  static constexpr double instances_per_image = 7.2;
  static constexpr double annotations_per_image = 700.7;
  static constexpr double annotations_per_box = 96.8;
  static constexpr double positives_per_box = 8.3;
  static constexpr double negatives_per_box = 88.5;
};

/// Notes where computed statistics differ from the published release
/// figures. Empty unless the dataset has the release's image and instance
/// counts.
std::vector<std::string> release_notes(const DatasetStats& stats);

std::string render_stats(const DatasetStats& stats);
std::string stats_json(const DatasetStats& stats);

std::string render_splits(const FrequencySplits& splits, std::span<const double> freq,
                          const Dataset& d);
std::string splits_json(const FrequencySplits& splits, std::span<const double> freq,
                        const Dataset& d);

std::string render_stability(std::span<const StabilityRow> rows);
std::string stability_json(std::span<const StabilityRow> rows, std::uint64_t seed,
                           std::size_t trials);
std::string stability_csv(std::span<const StabilityRow> rows);

}  // namespace ovad
