#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ovad/metrics.hpp"
#include "ovad/random.hpp"

namespace ovad {

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s;
  s.images = d.images.size();
  for (const auto& img : d.images) {
    s.instances += img.instances.size();
    for (const auto& inst : img.instances) {
      for (auto l : inst.labels) {
        switch (l) {
          case TriState::Positive: ++s.positives; break;
          case TriState::Negative: ++s.negatives; break;
          case TriState::Unknown: ++s.unknowns; break;
        }
      }
    }
  }
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  s.instances_per_image = ratio(s.instances, s.images);
  s.annotations_per_image = ratio(s.annotations(), s.images);
  s.positives_per_image = ratio(s.positives, s.images);
  s.negatives_per_image = ratio(s.negatives, s.images);
  s.annotations_per_box = ratio(s.annotations(), s.instances);
  s.positives_per_box = ratio(s.positives, s.instances);
  s.negatives_per_box = ratio(s.negatives, s.instances);
  return s;
}

namespace {

std::optional<double> population_std(const std::vector<double>& v) {
  if (v.size() < 2) return std::nullopt;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

struct StdAccumulator {
  double sum = 0.0;
  std::size_t n = 0;

  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace

std::vector<StabilityRow> subset_stability(const Dataset& d, const SubsetEvaluator& evaluate,
                                           std::span<const double> fractions,
                                           std::size_t trials, std::uint64_t seed,
                                           std::size_t max_subsets) {
  if (trials == 0) throw std::invalid_argument("stability needs at least one trial");
  if (max_subsets < 3) throw std::invalid_argument("stability needs at least three subsets");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0 / 3.0 + 1e-9)) {
      throw std::invalid_argument("fraction " + std::to_string(f) +
                                  " cannot form three disjoint subsets; use (0, 1/3]");
    }
  }

  // Trial t uses the same shuffle for every fraction.
  const std::size_t n = d.images.size();
  std::mt19937_64 engine(seed);
  std::vector<std::vector<std::size_t>> shuffles(trials);
  for (auto& order : shuffles) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    fisher_yates_shuffle(std::span<std::size_t>(order), engine);
  }

  std::vector<StabilityRow> rows;
  for (double f : fractions) {
    StabilityRow row;
    row.fraction = f;
    row.subset_size = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
    if (row.subset_size == 0) {
      throw DataError("fraction " + std::to_string(f) + " of " + std::to_string(n) +
                      " images selects no image");
    }
    row.subsets = std::min(max_subsets, n / row.subset_size);

    StdAccumulator acc_all, acc_head, acc_medium, acc_tail;
    for (const auto& order : shuffles) {
      std::vector<double> all, head, medium, tail;
      for (std::size_t s = 0; s < row.subsets; ++s) {
        Dataset sub;
        sub.taxonomy = d.taxonomy;
        sub.attribute_count = d.attribute_count;
        sub.categories = d.categories;
        for (std::size_t k = 0; k < row.subset_size; ++k) {
          sub.images.push_back(d.images[order[s * row.subset_size + k]]);
        }
        const auto report = evaluate(sub);
        if (report.map.all) all.push_back(*report.map.all);
        if (report.map.head) head.push_back(*report.map.head);
        if (report.map.medium) medium.push_back(*report.map.medium);
        if (report.map.tail) tail.push_back(*report.map.tail);
      }
      acc_all.add(population_std(all));
      acc_head.add(population_std(head));
      acc_medium.add(population_std(medium));
      acc_tail.add(population_std(tail));
    }
    row.std_dev = {acc_all.mean(), acc_head.mean(), acc_medium.mean(), acc_tail.mean()};
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ovad
