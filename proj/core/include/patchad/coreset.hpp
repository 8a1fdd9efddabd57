#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "patchad/feature_bank.hpp"

namespace patchad {

struct CoresetSelection {
  std::vector<std::size_t> indices;  // strictly increasing
  double proportion = 1.0;
  std::size_t seed_index = 0;
};

/// max(1, round(proportion * n)). proportion must lie in (0, 1].
std::size_t coreset_target_size(std::size_t n, double proportion);

/// Exact farthest-point (greedy k-center) subsampling. Starts at
/// `seed_index` and repeatedly adds the entry farthest from the selected set,
/// ties to the lowest index, until the target size is reached.
CoresetSelection greedy_kcenter(const MemoryBank& bank, double proportion, std::size_t seed_index = 0);

/// Same rule with an explicit target count (1..N).
CoresetSelection greedy_kcenter_count(const MemoryBank& bank, std::size_t target, std::size_t seed_index = 0);

/// Rows of `bank` at the selected indices, in index order.
MemoryBank select_entries(const MemoryBank& bank, const CoresetSelection& selection);

/// max over entries of the distance to the nearest center.
double cover_radius(const MemoryBank& bank, std::span<const std::size_t> centers);

/// One index per line.
void save_index_list(const CoresetSelection& selection, const std::filesystem::path& path);

}  // namespace patchad
