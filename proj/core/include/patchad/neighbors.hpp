#pragma once

// Exact nearest-neighbor search over a MemoryBank. Every routine orders
// candidates by (distance, index), so ties always resolve to the lower bank
// index regardless of platform.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "patchad/feature_bank.hpp"

namespace patchad {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean

  bool operator==(const Neighbor&) const = default;
};

/// Squared Euclidean distance accumulated in double precision.
double squared_distance(std::span<const float> a, std::span<const float> b) noexcept;

/// The single closest entry. Throws DimensionError on a dim mismatch.
Neighbor nearest(std::span<const float> query, const MemoryBank& bank);

/// The k closest entries sorted ascending by (distance, index). `exclude`
/// removes one index from consideration (used for self-exclusion).
/// Throws ParameterError when fewer than k candidates exist.
std::vector<Neighbor> k_nearest(std::span<const float> query, const MemoryBank& bank, std::size_t k,
                                std::optional<std::size_t> exclude = std::nullopt);

/// k nearest other entries for every bank row, via one pass over all pairs.
std::vector<std::vector<Neighbor>> all_k_nearest(const MemoryBank& bank, std::size_t k);

}  // namespace patchad
