#include "ovad/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ovad {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  // Areas from the same edge differences so a box against itself gives exactly 1.
  const double inter = iw * ih;
  const double uni = (a.right() - a.x) * (a.bottom() - a.y) +
                     (b.right() - b.x) * (b.bottom() - b.y) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_for_attributes(std::span<const AnnotatedInstance> gts,
                                 std::span<const PredictedInstance> preds, double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    throw std::invalid_argument("IoU threshold must lie in (0, 1]");
  }
  MatchResult out(gts.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    std::optional<AttributeMatch> best;
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const double v = iou(gts[g].box, preds[p].box);
      if (!best || v > best->iou) best = AttributeMatch{p, v};
    }
    if (best && best->iou >= iou_thresh) out[g] = best;
  }
  return out;
}

std::vector<bool> match_for_detection(std::span<const AnnotatedInstance> gts,
                                      std::span<const PredictedInstance> preds,
                                      CategoryId category, std::size_t score_index,
                                      double iou_thresh) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return preds[l].object_scores[score_index] > preds[r].object_scores[score_index];
  });

  std::vector<bool> claimed(gts.size(), false);
  std::vector<bool> tp(preds.size(), false);
  for (auto p : order) {
    std::optional<std::size_t> best;
    double best_iou = iou_thresh;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (claimed[g] || gts[g].category != category) continue;
      const double v = iou(gts[g].box, preds[p].box);
      if (v >= best_iou && (!best || v > best_iou)) {
        best = g;
        best_iou = v;
      }
    }
    if (best) {
      claimed[*best] = true;
      tp[p] = true;
    }
  }
  return tp;
}

}  // namespace ovad
