#include "patchad/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include "patchad/errors.hpp"
#include "patchad/interpolate.hpp"

namespace patchad {

namespace {

void check_k(std::size_t k, std::size_t max_k, std::string_view what) {
  if (k == 0 || k > max_k) {
    throw ParameterError(std::string(what) + " K = " + std::to_string(k) + " must be in 1.." + std::to_string(max_k));
  }
}

double mean_distance(const std::vector<Neighbor>& nbrs) {
  double sum = 0.0;
  for (const auto& n : nbrs) sum += n.distance;
  return sum / static_cast<double>(nbrs.size());
}

// lrd(p) = 1 / mean_{o in N_k(p)} max(k-distance(o), d(p, o))
template <typename KDist>
double local_reachability_density(const std::vector<Neighbor>& nbrs, KDist&& k_distance) {
  double sum = 0.0;
  for (const auto& o : nbrs) sum += std::max(k_distance(o.index), o.distance);
  return 1.0 / std::max(sum / static_cast<double>(nbrs.size()), kScoreEpsilon);
}

template <typename KDist, typename Lrd>
double lof_from_neighbors(const std::vector<Neighbor>& nbrs, KDist&& k_distance, Lrd&& lrd) {
  const double own = local_reachability_density(nbrs, k_distance);
  double sum = 0.0;
  for (const auto& o : nbrs) sum += lrd(o.index);
  return (sum / static_cast<double>(nbrs.size())) / own;
}

double ldof_from_neighbors(const std::vector<Neighbor>& nbrs, const MemoryBank& bank) {
  const double to_neighbors = mean_distance(nbrs);
  double pair_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < nbrs.size(); ++a) {
    for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
      pair_sum += std::sqrt(squared_distance(bank.row(nbrs[a].index), bank.row(nbrs[b].index)));
      ++pairs;
    }
  }
  const double inner = pairs == 0 ? 0.0 : pair_sum / static_cast<double>(pairs);
  return to_neighbors / std::max(inner, kScoreEpsilon);
}

}  // namespace

std::string_view to_string(ScoringMethod m) noexcept {
  switch (m) {
    case ScoringMethod::kLdknn: return "ldknn";
    case ScoringMethod::kKnn: return "knn";
    case ScoringMethod::kKthNn: return "kthnn";
    case ScoringMethod::kLof: return "lof";
    case ScoringMethod::kLdof: return "ldof";
  }
  return "unknown";
}

ScoringMethod parse_scoring_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  std::erase(lower, '_');
  std::erase(lower, '-');
  if (lower == "ldknn") return ScoringMethod::kLdknn;
  if (lower == "knn") return ScoringMethod::kKnn;
  if (lower == "kthnn") return ScoringMethod::kKthNn;
  if (lower == "lof") return ScoringMethod::kLof;
  if (lower == "ldof") return ScoringMethod::kLdof;
  throw ParameterError("unknown scoring method '" + std::string(name) + "' (expected ldknn, knn, kthnn, lof, ldof)");
}

NearestMatch nearest_neighbor(std::span<const float> f, const LocalDensityBank& bank) {
  const Neighbor nb = nearest(f, bank.bank());
  return {nb.index, nb.distance, static_cast<double>(bank.density(nb.index))};
}

double ldknn_score_patch(std::span<const float> f, const LocalDensityBank& bank, double alpha) {
  const NearestMatch m = nearest_neighbor(f, bank);
  return m.distance - alpha * m.density;
}

double knn_score(std::span<const float> f, const MemoryBank& bank, std::size_t k) {
  check_k(k, bank.size(), "KNN");
  return mean_distance(k_nearest(f, bank, k));
}

double kthnn_score(std::span<const float> f, const MemoryBank& bank, std::size_t k) {
  check_k(k, bank.size(), "Kth-NN");
  return k_nearest(f, bank, k).back().distance;
}

double lof_score(std::span<const float> f, const MemoryBank& bank, std::size_t k) {
  check_k(k, bank.size() - 1, "LOF");
  std::map<std::size_t, std::vector<Neighbor>> bank_neighbors;
  auto neighbors_of = [&](std::size_t i) -> const std::vector<Neighbor>& {
    auto it = bank_neighbors.find(i);
    if (it == bank_neighbors.end()) it = bank_neighbors.emplace(i, k_nearest(bank.row(i), bank, k, i)).first;
    return it->second;
  };
  auto k_distance = [&](std::size_t i) { return neighbors_of(i).back().distance; };
  auto lrd = [&](std::size_t i) { return local_reachability_density(neighbors_of(i), k_distance); };
  return lof_from_neighbors(k_nearest(f, bank, k), k_distance, lrd);
}

double ldof_score(std::span<const float> f, const MemoryBank& bank, std::size_t k) {
  check_k(k, bank.size(), "LDOF");
  return ldof_from_neighbors(k_nearest(f, bank, k), bank);
}

PixelMap upsample_map(const PatchScoreGrid& grid, std::size_t out_height, std::size_t out_width,
                      double smoothing_sigma) {
  if (out_height == 0 || out_width == 0) throw ParameterError("pixel map dims must be positive");
  if (out_height < grid.height || out_width < grid.width) {
    throw ParameterError("pixel map " + std::to_string(out_height) + "x" + std::to_string(out_width) +
                         " is smaller than the patch grid " + std::to_string(grid.height) + "x" +
                         std::to_string(grid.width));
  }
  auto values = bilinear_resize(grid.scores, grid.height, grid.width, out_height, out_width);
  values = gaussian_blur(values, out_height, out_width, smoothing_sigma);
  return {out_height, out_width, std::move(values)};
}

Scorer::Scorer(const LocalDensityBank& bank, const ScorerConfig& cfg)
    : bank_(&bank.bank()), densities_(bank.densities()), cfg_(cfg) {
  prepare();
}

Scorer::Scorer(const MemoryBank& bank, const ScorerConfig& cfg) : bank_(&bank), cfg_(cfg) {
  if (cfg_.method == ScoringMethod::kLdknn) {
    throw ParameterError("LDKNN scoring needs a bank with learned local densities");
  }
  prepare();
}

void Scorer::prepare() {
  if (!std::isfinite(cfg_.alpha) || cfg_.alpha < 0.0) throw ParameterError("alpha must be finite and >= 0");
  const std::size_t n = bank_->size();
  switch (cfg_.method) {
    case ScoringMethod::kLdknn:
      break;
    case ScoringMethod::kKnn:
    case ScoringMethod::kKthNn:
    case ScoringMethod::kLdof:
      check_k(cfg_.k, n, to_string(cfg_.method));
      break;
    case ScoringMethod::kLof: {
      check_k(cfg_.k, n - 1, "LOF");
      const auto nbrs = all_k_nearest(*bank_, cfg_.k);
      k_distance_.resize(n);
      for (std::size_t i = 0; i < n; ++i) k_distance_[i] = nbrs[i].back().distance;
      lrd_.resize(n);
      auto kd = [this](std::size_t i) { return k_distance_[i]; };
      for (std::size_t i = 0; i < n; ++i) lrd_[i] = local_reachability_density(nbrs[i], kd);
      break;
    }
  }
}

double Scorer::score_patch(std::span<const float> f) const {
  switch (cfg_.method) {
    case ScoringMethod::kLdknn: {
      const Neighbor nb = nearest(f, *bank_);
      return nb.distance - cfg_.alpha * static_cast<double>(densities_[nb.index]);
    }
    case ScoringMethod::kKnn:
      return mean_distance(k_nearest(f, *bank_, cfg_.k));
    case ScoringMethod::kKthNn:
      return k_nearest(f, *bank_, cfg_.k).back().distance;
    case ScoringMethod::kLof:
      return lof_from_neighbors(
          k_nearest(f, *bank_, cfg_.k), [this](std::size_t i) { return k_distance_[i]; },
          [this](std::size_t i) { return lrd_[i]; });
    case ScoringMethod::kLdof:
      return ldof_from_neighbors(k_nearest(f, *bank_, cfg_.k), *bank_);
  }
  return 0.0;
}

AnomalyResult Scorer::score_image(const PatchFeatureSet& patches, const std::optional<MapRequest>& map) const {
  patches.validate();
  if (patches.dim != bank_->dim()) {
    throw DimensionError("patch dim " + std::to_string(patches.dim) + " does not match bank dim " +
                         std::to_string(bank_->dim()));
  }
  AnomalyResult result;
  result.patches = {patches.grid_height, patches.grid_width, std::vector<double>(patches.rows())};
  for (std::size_t p = 0; p < patches.rows(); ++p) result.patches.scores[p] = score_patch(patches.row(p));
  result.image_score = *std::max_element(result.patches.scores.begin(), result.patches.scores.end());
  if (map) result.pixel_map = upsample_map(result.patches, map->height, map->width, map->smoothing_sigma);
  return result;
}

AnomalyResult score_image(const PatchFeatureSet& patches, const LocalDensityBank& bank, const ScorerConfig& cfg,
                          const std::optional<MapRequest>& map) {
  return Scorer(bank, cfg).score_image(patches, map);
}

}  // namespace patchad
