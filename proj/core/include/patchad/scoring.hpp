#pragma once

// Patch and image anomaly scoring against a memory bank.
//
//   LDKNN  s(f) = ||f - m_j|| - alpha * d_j, with m_j the 1-NN of f and d_j
//          its stored local density. Scores may be negative.
//   KNN    mean distance to the K nearest entries.
//   KTH_NN distance to the K-th nearest entry.
//   LOF    local outlier factor (reachability based, Breunig et al.).
//   LDOF   mean distance to the K nearest entries divided by the mean
//          pairwise distance among those entries (Zhang et al.).
//
// Zero densities and denominators in LOF/LDOF are floored at kScoreEpsilon.
// The image score is the maximum patch score.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "patchad/feature_bank.hpp"
#include "patchad/neighbors.hpp"

namespace patchad {

inline constexpr double kScoreEpsilon = 1e-12;

enum class ScoringMethod { kLdknn, kKnn, kKthNn, kLof, kLdof };

std::string_view to_string(ScoringMethod m) noexcept;
/// Accepts ldknn, knn, kthnn, lof, ldof (case-insensitive).
ScoringMethod parse_scoring_method(std::string_view name);

struct ScorerConfig {
  ScoringMethod method = ScoringMethod::kLdknn;
  std::size_t k = 9;   // neighbor count for KNN-family methods
  double alpha = 1.0;  // local density coefficient, LDKNN only
};

struct PatchScoreGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> scores;
};

struct PixelMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;
};

struct AnomalyResult {
  PatchScoreGrid patches;
  double image_score = 0.0;
  std::optional<PixelMap> pixel_map;
};

struct MapRequest {
  std::size_t height = 0;
  std::size_t width = 0;
  double smoothing_sigma = 0.0;
};

struct NearestMatch {
  std::size_t index = 0;
  double distance = 0.0;
  double density = 0.0;
};

NearestMatch nearest_neighbor(std::span<const float> f, const LocalDensityBank& bank);
double ldknn_score_patch(std::span<const float> f, const LocalDensityBank& bank, double alpha);
double knn_score(std::span<const float> f, const MemoryBank& bank, std::size_t k);
double kthnn_score(std::span<const float> f, const MemoryBank& bank, std::size_t k);
/// Computes the bank-side k-distances on demand (O(K^2 N) per call). Use a
/// Scorer to amortize them over many queries.
double lof_score(std::span<const float> f, const MemoryBank& bank, std::size_t k);
double ldof_score(std::span<const float> f, const MemoryBank& bank, std::size_t k);

/// Bilinear (half-pixel) upsampling of a patch grid, then an optional
/// Gaussian blur. sigma 0 disables smoothing.
PixelMap upsample_map(const PatchScoreGrid& grid, std::size_t out_height, std::size_t out_width,
                      double smoothing_sigma = 0.0);

/// Configured scorer over an immutable bank. Holds a reference: the bank
/// must outlive the scorer. For LOF the bank-side k-distances and local
/// reachability densities are precomputed at construction.
class Scorer {
 public:
  Scorer(const LocalDensityBank& bank, const ScorerConfig& cfg);
  /// For methods that need no densities. LDKNN raises ParameterError.
  Scorer(const MemoryBank& bank, const ScorerConfig& cfg);

  double score_patch(std::span<const float> f) const;
  AnomalyResult score_image(const PatchFeatureSet& patches,
                            const std::optional<MapRequest>& map = std::nullopt) const;

  const ScorerConfig& config() const noexcept { return cfg_; }
  const MemoryBank& bank() const noexcept { return *bank_; }

 private:
  void prepare();

  const MemoryBank* bank_;
  std::span<const float> densities_;
  ScorerConfig cfg_;
  std::vector<double> k_distance_;  // LOF only
  std::vector<double> lrd_;         // LOF only
};

AnomalyResult score_image(const PatchFeatureSet& patches, const LocalDensityBank& bank, const ScorerConfig& cfg,
                          const std::optional<MapRequest>& map = std::nullopt);

}  // namespace patchad
