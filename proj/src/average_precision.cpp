#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ovad/metrics.hpp"

namespace ovad {

std::optional<double> average_precision(const RankedSamples& samples) {
  std::size_t positives = samples.ghost_positives;
  for (const auto& e : samples.entries) {
    if (!std::isfinite(e.score)) throw std::invalid_argument("non-finite score in ranking");
    positives += e.positive;
  }
  if (positives == 0) return std::nullopt;

  std::vector<ScoredLabel> ranked = samples.entries;
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredLabel& l, const ScoredLabel& r) { return l.score > r.score; });

  // One operating point per distinct score.
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < ranked.size();) {
    std::size_t j = i;
    for (; j < ranked.size() && ranked[j].score == ranked[i].score; ++j) {
      ranked[j].positive ? ++tp : ++fp;
    }
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    i = j;
  }

  for (std::size_t k = precision.size(); k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < recall.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

std::string_view to_string(FrequencyBand b) {
  switch (b) {
    case FrequencyBand::Head: return "head";
    case FrequencyBand::Medium: return "medium";
    case FrequencyBand::Tail: return "tail";
  }
  return "medium";
}

std::vector<FrequencyBand> FrequencySplits::bands() const {
  std::vector<FrequencyBand> out(size(), FrequencyBand::Medium);
  for (auto id : head) out.at(id) = FrequencyBand::Head;
  for (auto id : tail) out.at(id) = FrequencyBand::Tail;
  return out;
}

FrequencySplits frequency_splits(std::span<const double> freq) {
  FrequencySplits s;
  if (freq.empty()) return s;

  std::vector<double> sorted(freq.begin(), freq.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median =
      n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  const double mean = std::accumulate(freq.begin(), freq.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double f : freq) ss += (f - mean) * (f - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));

  s.t_high = median + sd;
  s.t_low = median - sd / 10.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (freq[a] > s.t_high) {
      s.head.push_back(a);
    } else if (freq[a] < s.t_low) {
      s.tail.push_back(a);
    } else {
      s.medium.push_back(a);
    }
  }
  return s;
}

namespace {

std::optional<double> mean_of(std::span<const std::optional<double>> values,
                              std::span<const std::size_t> ids) {
  double sum = 0.0;
  std::size_t n = 0;
  for (auto id : ids) {
    if (id < values.size() && values[id]) {
      sum += *values[id];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

SplitMeans split_means(std::span<const std::optional<double>> per_attribute,
                       const FrequencySplits& splits) {
  std::vector<std::size_t> all(per_attribute.size());
  std::iota(all.begin(), all.end(), 0);
  return {mean_of(per_attribute, all), mean_of(per_attribute, splits.head),
          mean_of(per_attribute, splits.medium), mean_of(per_attribute, splits.tail)};
}

}  // namespace ovad
