#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

enum class InfeasiblePolicy { Negative, Unknown };

/// One annotator decision for an annotation field (a type, or a human
/// subtype such as "hair color"). An unset `chosen` means the field was
/// marked Unknown.
struct TypeSelection {
  std::string attr_type;
  std::optional<std::set<std::size_t>> chosen;
};

/// Annotation fields the annotation tool offered for this category.
std::set<std::string> feasible_types(const ObjectCategory& category,
                                     const AttributeTaxonomy& taxonomy);

/// Expands per-field selections into a full tri-state label vector.
///
/// Exclusive fields: the chosen attribute is Positive, its siblings Negative.
/// ColorMultiSelect: chosen colours Positive; the rest Negative only when the
/// instance's colour-quantity selection pins the count to exactly the number
/// chosen, otherwise Unknown. AntonymPairs: chosen Positive, its antonym
/// Negative, the rest of the field Unknown. Fields marked Unknown or left
/// without a selection are Unknown; infeasible fields follow `policy`.
std::vector<TriState> propagate_labels(std::span<const TypeSelection> selections,
                                       const ObjectCategory& category,
                                       const AttributeTaxonomy& taxonomy,
                                       InfeasiblePolicy policy = InfeasiblePolicy::Negative);

/// Percentage of (instance, attribute) positions with identical states.
/// Unknown agreeing with Unknown counts as agreement.
double annotation_consistency(std::span<const std::vector<TriState>> a,
                              std::span<const std::vector<TriState>> b);

}  // namespace ovad
