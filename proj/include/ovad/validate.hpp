#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

struct Violation {
  std::optional<ImageId> image_id;
  std::optional<std::size_t> instance_index;
  std::string message;

  std::string to_string() const;
};

/// Lists every structural problem in `dataset`; an empty result means valid.
std::vector<Violation> validate_dataset(const Dataset& dataset);

}  // namespace ovad
