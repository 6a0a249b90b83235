#include <algorithm>
#include <stdexcept>

#include "ovad/geometry.hpp"
#include "ovad/metrics.hpp"
#include "ovad/parallel.hpp"

namespace ovad {

std::string_view to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Detection: return "detection";
    case EvalMode::BoxOracle: return "box-oracle";
    case EvalMode::Chance: return "chance";
  }
  return "detection";
}

std::vector<AttributeCounts> attribute_counts(const Dataset& d) {
  std::vector<AttributeCounts> out(d.attribute_count);
  for (const auto& img : d.images) {
    for (const auto& inst : img.instances) {
      const std::size_t n = std::min(inst.labels.size(), out.size());
      for (std::size_t a = 0; a < n; ++a) {
        switch (inst.labels[a]) {
          case TriState::Positive: ++out[a].positives; break;
          case TriState::Negative: ++out[a].negatives; break;
          case TriState::Unknown: ++out[a].unknowns; break;
        }
      }
    }
  }
  return out;
}

std::vector<double> positive_frequencies(const Dataset& d) {
  std::vector<double> out;
  for (const auto& c : attribute_counts(d)) out.push_back(static_cast<double>(c.positives));
  return out;
}

namespace {

void require_label_lengths(const Dataset& d) {
  for (const auto& img : d.images) {
    for (std::size_t k = 0; k < img.instances.size(); ++k) {
      if (img.instances[k].labels.size() != d.attribute_count) {
        throw DataError("image " + std::to_string(img.id) + " instance " + std::to_string(k) +
                        ": label vector length differs from the attribute count");
      }
    }
  }
}

// Builds the report from one score vector (or none, for unmatched ground
// truths) per instance, in dataset order.
EvalReport evaluate_instances(const Dataset& d, std::span<const std::vector<double>* const> scores,
                              EvalMode mode, const EvalOptions& opts) {
  EvalReport report;
  report.mode = mode;
  report.counts = attribute_counts(d);
  report.splits = opts.splits ? *opts.splits : frequency_splits(positive_frequencies(d));
  if (report.splits.size() != d.attribute_count) {
    throw DataError("frequency splits cover " + std::to_string(report.splits.size()) +
                    " attributes, dataset has " + std::to_string(d.attribute_count));
  }

  std::vector<const AnnotatedInstance*> instances;
  instances.reserve(scores.size());
  for (const auto& img : d.images) {
    for (const auto& inst : img.instances) instances.push_back(&inst);
  }

  report.per_attribute_ap.assign(d.attribute_count, std::nullopt);
  parallel_for(d.attribute_count, opts.workers, [&](std::size_t a) {
    RankedSamples samples;
    samples.entries.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const TriState label = instances[i]->labels[a];
      if (label == TriState::Unknown) continue;
      const bool pos = label == TriState::Positive;
      if (scores[i]) {
        samples.entries.push_back({(*scores[i])[a], pos});
      } else if (pos) {
        ++samples.ghost_positives;
      }
    }
    report.per_attribute_ap[a] = average_precision(samples);
  });
  report.map = split_means(report.per_attribute_ap, report.splits);
  return report;
}

}  // namespace

EvalReport attribute_eval(const Dataset& d, const Predictions& preds, const EvalOptions& opts) {
  require_label_lengths(d);
  static const std::vector<PredictedInstance> kNone;

  std::vector<std::size_t> offset(d.images.size() + 1, 0);
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    offset[i + 1] = offset[i] + d.images[i].instances.size();
  }
  std::vector<const std::vector<double>*> scores(offset.back(), nullptr);

  parallel_for(d.images.size(), opts.workers, [&](std::size_t i) {
    const auto& img = d.images[i];
    auto it = preds.find(img.id);
    const auto& list = it == preds.end() ? kNone : it->second;
    for (const auto& p : list) {
      if (p.attribute_scores.size() != d.attribute_count) {
        throw DataError("image " + std::to_string(img.id) +
                        ": prediction attribute scores have the wrong length");
      }
    }
    const auto match = match_for_attributes(img.instances, list, opts.iou_threshold);
    for (std::size_t g = 0; g < match.size(); ++g) {
      if (match[g]) scores[offset[i] + g] = &list[match[g]->prediction].attribute_scores;
    }
  });
  return evaluate_instances(d, scores, EvalMode::Detection, opts);
}

EvalReport box_oracle_eval(const Dataset& d, const OracleScores& oracle, const EvalOptions& opts) {
  require_label_lengths(d);
  std::vector<const std::vector<double>*> scores;
  scores.reserve(d.instance_count());
  for (const auto& img : d.images) {
    for (std::size_t k = 0; k < img.instances.size(); ++k) {
      auto it = oracle.find({img.id, k});
      if (it == oracle.end()) {
        throw DataError("no box-oracle scores for image " + std::to_string(img.id) +
                        " instance " + std::to_string(k));
      }
      if (it->second.size() != d.attribute_count) {
        throw DataError("box-oracle scores for image " + std::to_string(img.id) +
                        " have the wrong length");
      }
      scores.push_back(&it->second);
    }
  }
  return evaluate_instances(d, scores, EvalMode::BoxOracle, opts);
}

EvalReport chance_report(const Dataset& d, const FrequencySplits& splits) {
  EvalReport report;
  report.mode = EvalMode::Chance;
  report.counts = attribute_counts(d);
  report.splits = splits;
  for (const auto& c : report.counts) {
    if (c.positives == 0) {
      report.per_attribute_ap.emplace_back();
    } else {
      report.per_attribute_ap.emplace_back(static_cast<double>(c.positives) /
                                           static_cast<double>(c.positives + c.negatives));
    }
  }
  report.map = split_means(report.per_attribute_ap, splits);
  return report;
}

Ovd80Result ovd80_eval(const Dataset& d, const Predictions& preds, const EvalOptions& opts) {
  static const std::vector<PredictedInstance> kNone;
  const std::size_t ncat = d.categories.size();
  for (const auto& [image_id, list] : preds) {
    for (const auto& p : list) {
      if (p.object_scores.size() != ncat) {
        throw DataError("image " + std::to_string(image_id) +
                        ": prediction lacks scores for every category");
      }
    }
  }

  Ovd80Result out;
  out.per_category.assign(ncat, std::nullopt);
  parallel_for(ncat, opts.workers, [&](std::size_t c) {
    const CategoryId cid = d.categories[c].id;
    RankedSamples samples;
    std::size_t gt_count = 0;
    std::size_t tp_count = 0;
    for (const auto& img : d.images) {
      gt_count += std::count_if(img.instances.begin(), img.instances.end(),
                                [&](const auto& g) { return g.category == cid; });
      auto it = preds.find(img.id);
      const auto& list = it == preds.end() ? kNone : it->second;
      const auto flags = match_for_detection(img.instances, list, cid, c, opts.iou_threshold);
      for (std::size_t p = 0; p < list.size(); ++p) {
        samples.entries.push_back({list[p].object_scores[c], flags[p]});
        tp_count += flags[p];
      }
    }
    samples.ghost_positives = gt_count - tp_count;
    out.per_category[c] = average_precision(samples);
  });

  auto mean_where = [&](auto&& pred) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < ncat; ++c) {
      if (out.per_category[c] && pred(d.categories[c])) {
        sum += *out.per_category[c];
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  out.novel = mean_where([](const ObjectCategory& c) { return c.split == Split::Novel; });
  out.base = mean_where([](const ObjectCategory& c) { return c.split == Split::Base; });
  out.all = mean_where([](const ObjectCategory&) { return true; });
  return out;
}

}  // namespace ovad
