#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "patchad/tensor_io.hpp"

namespace patchad {

/// Grid of D-dimensional patch vectors for one image, row-major over the grid.
struct PatchFeatureSet {
  std::size_t grid_height = 0;
  std::size_t grid_width = 0;
  std::size_t dim = 0;
  std::vector<float> vectors;

  std::size_t rows() const noexcept { return grid_height * grid_width; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(vectors).subspan(i * dim, dim);
  }
  void validate() const;
};

/// N x D matrix of normal patch features. Immutable after construction.
class MemoryBank {
 public:
  /// Throws EmptinessError for N == 0, DimensionError when the value count
  /// is not a multiple of `dim`.
  MemoryBank(std::size_t dim, std::vector<float> entries);

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(entries_).subspan(i * dim_, dim_);
  }
  std::span<const float> data() const noexcept { return entries_; }

 private:
  std::size_t dim_;
  std::size_t size_;
  std::vector<float> entries_;
};

/// Memory bank paired with the per-entry local-density distance d_i, the mean
/// distance from entry i to its k_used nearest other entries.
class LocalDensityBank {
 public:
  LocalDensityBank(MemoryBank bank, std::vector<float> densities, std::size_t k_used);

  const MemoryBank& bank() const noexcept { return bank_; }
  std::span<const float> densities() const noexcept { return densities_; }
  float density(std::size_t i) const noexcept { return densities_[i]; }
  std::size_t k_used() const noexcept { return k_used_; }
  std::size_t size() const noexcept { return bank_.size(); }
  std::size_t dim() const noexcept { return bank_.dim(); }

 private:
  MemoryBank bank_;
  std::vector<float> densities_;
  std::size_t k_used_;
};

inline constexpr std::size_t kDefaultPoolWindow = 3;

/// Mean-pools both hierarchies (stride 1, edge replication), bilinearly
/// upsamples phi3 onto phi2's grid and concatenates channels: D = C2 + C3.
PatchFeatureSet aggregate_hierarchies(const FeatureTensor& phi2, const FeatureTensor& phi3,
                                      std::size_t pool_window = kDefaultPoolWindow);

/// Concatenates rows image-major, row-major within each image.
MemoryBank build_memory_bank(std::span<const PatchFeatureSet> sets);

/// Exact brute-force local densities. The entry itself is excluded from its
/// own neighbor list, duplicates are not; ties go to the lower index.
/// Requires 1 <= k <= N - 1.
LocalDensityBank learn_local_density(const MemoryBank& bank, std::size_t k);

// Bank files: an N x D tensor, then (density banks only) a length-N density
// tensor followed by k_used as a little-endian u32.
void write_memory_bank(const MemoryBank& bank, std::ostream& out);
MemoryBank read_memory_bank(std::istream& in);
void write_bank(const LocalDensityBank& bank, std::ostream& out);
LocalDensityBank read_bank(std::istream& in);

void save_memory_bank(const MemoryBank& bank, const std::filesystem::path& path);
MemoryBank load_memory_bank(const std::filesystem::path& path);
void save_bank(const LocalDensityBank& bank, const std::filesystem::path& path);
LocalDensityBank load_bank(const std::filesystem::path& path);

}  // namespace patchad
