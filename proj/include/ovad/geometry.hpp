#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

double iou(const BoundingBox& a, const BoundingBox& b);

struct AttributeMatch {
  std::size_t prediction = 0;
  double iou = 0.0;
};

/// Per ground truth, the matched prediction (if any).
using MatchResult = std::vector<std::optional<AttributeMatch>>;

/// Class-agnostic matching for attribute evaluation: every ground truth
/// independently takes the prediction of maximum IoU (lowest index on ties)
/// and keeps it iff IoU >= iou_thresh. A prediction may serve several ground
/// truths.
MatchResult match_for_attributes(std::span<const AnnotatedInstance> gts,
                                 std::span<const PredictedInstance> preds,
                                 double iou_thresh = 0.5);

/// Greedy detection matching for one category. Predictions are visited by
/// descending score `object_scores[score_index]` (stable on ties); each one
/// claims the unclaimed ground truth of `category` with the highest IoU
/// >= iou_thresh, else it is a false positive. Returns one flag per
/// prediction in input order (true = true positive).
std::vector<bool> match_for_detection(std::span<const AnnotatedInstance> gts,
                                      std::span<const PredictedInstance> preds,
                                      CategoryId category, std::size_t score_index,
                                      double iou_thresh = 0.5);

}  // namespace ovad
