#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

struct ScoredLabel {
  double score = 0.0;
  bool positive = false;
};

struct RankedSamples {
  std::vector<ScoredLabel> entries;
  // Positives that were never scored (unmatched ground truths). They count
  // towards the recall denominator and are never retrieved.
  std::size_t ghost_positives = 0;
};

/// All-point AP: the precision envelope integrated over recall, with one
/// operating point per distinct score. Empty when there are no positives.
/// Throws std::invalid_argument on non-finite scores.
std::optional<double> average_precision(const RankedSamples& samples);

enum class FrequencyBand { Head, Medium, Tail };

std::string_view to_string(FrequencyBand b);

struct FrequencySplits {
  std::vector<std::size_t> head;
  std::vector<std::size_t> medium;
  std::vector<std::size_t> tail;
  double t_high = 0.0;
  double t_low = 0.0;

  std::size_t size() const { return head.size() + medium.size() + tail.size(); }
  /// Band per attribute id, for ids 0..size()-1.
  std::vector<FrequencyBand> bands() const;
};

/// head: f > median + std; tail: f < median - std/10; medium: the rest.
/// std is the population standard deviation; values on a threshold are medium.
FrequencySplits frequency_splits(std::span<const double> freq);

struct SplitMeans {
  std::optional<double> all;
  std::optional<double> head;
  std::optional<double> medium;
  std::optional<double> tail;
};

/// Unweighted means of the defined per-attribute values, per split.
SplitMeans split_means(std::span<const std::optional<double>> per_attribute,
                       const FrequencySplits& splits);

struct AttributeCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t unknowns = 0;
};

std::vector<AttributeCounts> attribute_counts(const Dataset& d);
std::vector<double> positive_frequencies(const Dataset& d);

enum class EvalMode { Detection, BoxOracle, Chance };

std::string_view to_string(EvalMode m);

struct Ovd80Result {
  std::vector<std::optional<double>> per_category;  // indexed like Dataset::categories
  std::optional<double> novel;
  std::optional<double> base;
  std::optional<double> all;
};

struct EvalReport {
  EvalMode mode = EvalMode::Detection;
  std::vector<std::optional<double>> per_attribute_ap;
  std::vector<AttributeCounts> counts;
  FrequencySplits splits;
  SplitMeans map;
  std::optional<Ovd80Result> ovd80;
};

struct EvalOptions {
  double iou_threshold = 0.5;
  unsigned workers = 0;  // 0 = hardware concurrency
  // Bands to aggregate over; computed from the dataset when unset.
  std::optional<FrequencySplits> splits;
};

/// Detection mode: ground truths are matched class-agnostically to
/// predictions; unmatched positives become ghost positives and unmatched
/// negatives are dropped. Unknown labels never enter the ranking.
EvalReport attribute_eval(const Dataset& d, const Predictions& preds,
                          const EvalOptions& opts = {});

/// Box-oracle mode: one score vector per ground-truth instance is required.
EvalReport box_oracle_eval(const Dataset& d, const OracleScores& scores,
                           const EvalOptions& opts = {});

/// AP of a constant scorer, i.e. the prevalence P/(P+N) per attribute.
EvalReport chance_report(const Dataset& d, const FrequencySplits& splits);

/// Generalized AP50 over all categories; every prediction competes in every
/// category with that category's score.
Ovd80Result ovd80_eval(const Dataset& d, const Predictions& preds,
                       const EvalOptions& opts = {});

struct DatasetStats {
  std::size_t images = 0;
  std::size_t instances = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t unknowns = 0;
  std::optional<double> instances_per_image;
  std::optional<double> annotations_per_image;  // positives + negatives
  std::optional<double> positives_per_image;
  std::optional<double> negatives_per_image;
  std::optional<double> annotations_per_box;
  std::optional<double> positives_per_box;
  std::optional<double> negatives_per_box;

  std::size_t annotations() const { return positives + negatives; }
};

DatasetStats dataset_stats(const Dataset& d);

struct StabilityRow {
  double fraction = 0.0;
  std::size_t subset_size = 0;
  std::size_t subsets = 0;
  SplitMeans std_dev;  // averaged over trials
};

using SubsetEvaluator = std::function<EvalReport(const Dataset&)>;

/// For each fraction, shuffles the images `trials` times (MT19937-64 seeded
/// with `seed`, rejection-sampled Fisher-Yates), cuts up to `max_subsets`
/// disjoint subsets of floor(fraction * images) images, and reports the
/// population std of the per-subset mAP, averaged over trials.
/// Fractions outside (0, 1/3] throw std::invalid_argument.
std::vector<StabilityRow> subset_stability(const Dataset& d, const SubsetEvaluator& evaluate,
                                           std::span<const double> fractions,
                                           std::size_t trials, std::uint64_t seed,
                                           std::size_t max_subsets = 6);

}  // namespace ovad
