#pragma once

// Slow reference implementations used only to check the library. They are
// written from the definitions, not from the library code.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "ovad/core_types.hpp"
#include "ovad/metrics.hpp"

namespace oracle {

/// Threshold sweep: for every distinct score t, retrieve everything scoring
/// >= t and record (recall, precision). AP integrates the envelope
/// p(r) = max precision at recall >= r over the recall steps.
inline std::optional<double> average_precision(const std::vector<ovad::ScoredLabel>& entries,
                                               std::size_t ghosts) {
  std::size_t positives = ghosts;
  for (const auto& e : entries) positives += e.positive;
  if (positives == 0) return std::nullopt;

  std::set<double, std::greater<>> thresholds;
  for (const auto& e : entries) thresholds.insert(e.score);

  std::vector<double> recall, precision;
  for (double t : thresholds) {
    std::size_t tp = 0, retrieved = 0;
    for (const auto& e : entries) {
      if (e.score >= t) {
        ++retrieved;
        tp += e.positive;
      }
    }
    recall.push_back(double(tp) / double(positives));
    precision.push_back(double(tp) / double(retrieved));
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < recall.size(); ++k) {
    double best = 0.0;
    for (std::size_t j = k; j < precision.size(); ++j) best = std::max(best, precision[j]);
    ap += (recall[k] - prev_recall) * best;
    prev_recall = recall[k];
  }
  return ap;
}

inline std::optional<double> average_precision(const ovad::RankedSamples& s) {
  return average_precision(s.entries, s.ghost_positives);
}

/// IoU of integer-cornered boxes by counting unit cells.
inline double iou_by_cells(const ovad::BoundingBox& a, const ovad::BoundingBox& b) {
  const int x0 = int(std::min(a.x, b.x)), y0 = int(std::min(a.y, b.y));
  const int x1 = int(std::max(a.right(), b.right())), y1 = int(std::max(a.bottom(), b.bottom()));
  auto inside = [](const ovad::BoundingBox& r, int cx, int cy) {
    return cx >= r.x && cx + 1 <= r.right() && cy >= r.y && cy + 1 <= r.bottom();
  };
  long both = 0, either = 0;
  for (int cx = x0; cx < x1; ++cx) {
    for (int cy = y0; cy < y1; ++cy) {
      const bool ia = inside(a, cx, cy), ib = inside(b, cx, cy);
      both += ia && ib;
      either += ia || ib;
    }
  }
  return either == 0 ? 0.0 : double(both) / double(either);
}

/// Plain-arithmetic IoU used where cell counting is not possible.
inline double iou(const ovad::BoundingBox& a, const ovad::BoundingBox& b) {
  const double iw = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Per ground truth, the index of the best prediction with IoU >= thresh.
inline std::vector<std::optional<std::size_t>> attribute_matches(
    const std::vector<ovad::AnnotatedInstance>& gts,
    const std::vector<ovad::PredictedInstance>& preds, double thresh) {
  std::vector<std::optional<std::size_t>> out;
  for (const auto& g : gts) {
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const double v = iou(g.box, preds[p].box);
      if (v > best_iou) {
        best_iou = v;
        best = p;
      }
    }
    out.push_back(best && best_iou >= thresh ? best : std::nullopt);
  }
  return out;
}

/// Greedy detection matching, brute force over orderings: among all
/// permutations of the predictions, take the lexicographically first one
/// whose scores are non-increasing, then let each prediction in that order
/// claim its best unclaimed ground truth.
inline std::vector<bool> detection_flags(const std::vector<ovad::AnnotatedInstance>& gts,
                                         const std::vector<ovad::PredictedInstance>& preds,
                                         ovad::CategoryId category, std::size_t score_index,
                                         double thresh) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    bool sorted = true;
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (preds[order[k]].object_scores[score_index] >
          preds[order[k - 1]].object_scores[score_index]) {
        sorted = false;
      }
    }
    if (sorted) break;
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<bool> claimed(gts.size(), false), flags(preds.size(), false);
  for (std::size_t p : order) {
    std::optional<std::size_t> best;
    double best_iou = thresh;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].category != category || claimed[g]) continue;
      const double v = iou(gts[g].box, preds[p].box);
      if (v >= best_iou && (!best || v > iou(gts[*best].box, preds[p].box))) {
        best = g;
        best_iou = v;
      }
    }
    if (best) {
      claimed[*best] = true;
      flags[p] = true;
    }
  }
  return flags;
}

inline std::optional<double> mean_defined(const std::vector<std::optional<double>>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : v) {
    if (x) {
      sum += *x;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / double(n);
}

/// Detection-mode attribute mAP from first principles.
inline std::vector<std::optional<double>> attribute_aps(const ovad::Dataset& d,
                                                        const ovad::Predictions& preds,
                                                        double thresh) {
  std::vector<std::optional<double>> aps;
  for (std::size_t a = 0; a < d.attribute_count; ++a) {
    std::vector<ovad::ScoredLabel> entries;
    std::size_t ghosts = 0;
    for (const auto& img : d.images) {
      std::vector<ovad::PredictedInstance> list;
      if (auto it = preds.find(img.id); it != preds.end()) list = it->second;
      const auto m = attribute_matches(img.instances, list, thresh);
      for (std::size_t g = 0; g < img.instances.size(); ++g) {
        const auto label = img.instances[g].labels[a];
        if (label == ovad::TriState::Unknown) continue;
        const bool pos = label == ovad::TriState::Positive;
        if (m[g]) {
          entries.push_back({list[*m[g]].attribute_scores[a], pos});
        } else if (pos) {
          ++ghosts;
        }
      }
    }
    aps.push_back(average_precision(entries, ghosts));
  }
  return aps;
}

/// Generalized AP50 per category from first principles.
inline std::vector<std::optional<double>> category_aps(const ovad::Dataset& d,
                                                       const ovad::Predictions& preds,
                                                       double thresh) {
  std::vector<std::optional<double>> aps;
  for (std::size_t c = 0; c < d.categories.size(); ++c) {
    std::vector<ovad::ScoredLabel> entries;
    std::size_t gt = 0, tp = 0;
    for (const auto& img : d.images) {
      for (const auto& g : img.instances) gt += g.category == d.categories[c].id;
      std::vector<ovad::PredictedInstance> list;
      if (auto it = preds.find(img.id); it != preds.end()) list = it->second;
      const auto flags = detection_flags(img.instances, list, d.categories[c].id, c, thresh);
      for (std::size_t p = 0; p < list.size(); ++p) {
        entries.push_back({list[p].object_scores[c], flags[p]});
        tp += flags[p];
      }
    }
    aps.push_back(average_precision(entries, gt - tp));
  }
  return aps;
}

}  // namespace oracle
