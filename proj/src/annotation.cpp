#include "ovad/annotation.hpp"

#include <algorithm>
#include <map>

namespace ovad {

namespace {

std::optional<int> selected_color_count(std::span<const TypeSelection> selections,
                                        const AttributeTaxonomy& taxonomy) {
  for (const auto& sel : selections) {
    if (!sel.chosen || sel.chosen->size() != 1) continue;
    const auto& a = taxonomy.attributes[*sel.chosen->begin()];
    if (a.color_count) return a.color_count;
  }
  return std::nullopt;
}

}  // namespace

std::set<std::string> feasible_types(const ObjectCategory& category,
                                     const AttributeTaxonomy& taxonomy) {
  auto it = taxonomy.feasibility.find(category.group);
  if (it == taxonomy.feasibility.end()) {
    throw DataError("no feasibility entry for group '" +
                    std::string(to_string(category.group)) + "'");
  }
  return it->second;
}

std::vector<TriState> propagate_labels(std::span<const TypeSelection> selections,
                                       const ObjectCategory& category,
                                       const AttributeTaxonomy& taxonomy,
                                       InfeasiblePolicy policy) {
  const auto feasible = feasible_types(category, taxonomy);
  const auto fields = taxonomy.fields();

  std::map<std::string, const TypeSelection*> by_field;
  for (const auto& sel : selections) {
    if (std::find(fields.begin(), fields.end(), sel.attr_type) == fields.end()) {
      throw DataError("selection for unknown attribute type '" + sel.attr_type + "'");
    }
    if (!by_field.emplace(sel.attr_type, &sel).second) {
      throw DataError("two selections for attribute type '" + sel.attr_type + "'");
    }
    if (!feasible.count(sel.attr_type)) {
      throw DataError("attribute type '" + sel.attr_type + "' is not feasible for '" +
                      category.name + "'");
    }
    if (!sel.chosen) continue;
    if (sel.chosen->empty()) {
      throw DataError("selection for '" + sel.attr_type + "' chooses nothing");
    }
    for (auto id : *sel.chosen) {
      if (id >= taxonomy.size() || taxonomy.attributes[id].field() != sel.attr_type) {
        throw DataError("selection for '" + sel.attr_type +
                        "' references an attribute outside that type");
      }
    }
    const auto kind = taxonomy.attributes[*sel.chosen->begin()].exclusivity;
    if (kind != Exclusivity::ColorMultiSelect && sel.chosen->size() > 1) {
      throw DataError("only colour types accept several attributes ('" + sel.attr_type + "')");
    }
  }

  const TriState infeasible_state =
      policy == InfeasiblePolicy::Negative ? TriState::Negative : TriState::Unknown;
  const auto color_count = selected_color_count(selections, taxonomy);

  std::vector<TriState> labels(taxonomy.size(), TriState::Unknown);
  for (const auto& field : fields) {
    const auto members = taxonomy.members(field);
    if (!feasible.count(field)) {
      for (auto id : members) labels[id] = infeasible_state;
      continue;
    }
    auto it = by_field.find(field);
    if (it == by_field.end() || !it->second->chosen) continue;  // stays Unknown

    const auto& chosen = *it->second->chosen;
    switch (taxonomy.attributes[members.front()].exclusivity) {
      case Exclusivity::Exclusive:
        for (auto id : members) {
          labels[id] = chosen.count(id) ? TriState::Positive : TriState::Negative;
        }
        break;
      case Exclusivity::ColorMultiSelect: {
        const bool capped =
            color_count && static_cast<std::size_t>(*color_count) == chosen.size();
        for (auto id : members) {
          labels[id] = chosen.count(id) ? TriState::Positive
                       : capped         ? TriState::Negative
                                        : TriState::Unknown;
        }
        break;
      }
      case Exclusivity::AntonymPairs: {
        const auto pick = *chosen.begin();
        labels[pick] = TriState::Positive;
        if (const auto& anto = taxonomy.attributes[pick].antonym_of) {
          labels[*anto] = TriState::Negative;
        }
        break;
      }
    }
  }
  return labels;
}

double annotation_consistency(std::span<const std::vector<TriState>> a,
                              std::span<const std::vector<TriState>> b) {
  if (a.size() != b.size()) {
    throw DataError("annotation sets differ in instance count (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  std::size_t total = 0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) {
      throw DataError("instance " + std::to_string(i) + " has label vectors of different length");
    }
    total += a[i].size();
    for (std::size_t k = 0; k < a[i].size(); ++k) same += a[i][k] == b[i][k];
  }
  if (total == 0) throw DataError("consistency is undefined over zero positions");
  return 100.0 * static_cast<double>(same) / static_cast<double>(total);
}

}  // namespace ovad
