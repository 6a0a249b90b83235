#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace ovad {

// std::uniform_int_distribution and std::shuffle are implementation-defined;
// these helpers keep every draw reproducible across standard libraries.

/// Uniform integer in [0, n) by rejection sampling, n > 0.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // [0, last] holds a whole multiple of n values.
  const std::uint64_t last = kMax - (kMax % n + 1) % n;
  for (;;) {
    const std::uint64_t x = engine();
    if (x <= last) return x % n;
  }
}

template <typename T>
void fisher_yates_shuffle(std::span<T> values, std::mt19937_64& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace ovad
