#pragma once

// Fixed-seed synthetic fixtures shared by the acceptance run.

#include <cmath>
#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "patchad/feature_bank.hpp"
#include "patchad/rng.hpp"

namespace fixture {

/// Box-Muller over the engine-independent Rng mapping, so draws are the
/// same on every standard library.
inline double gaussian(patchad::Rng& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::vector<float> around(const std::vector<double>& center, double sigma, patchad::Rng& rng) {
  std::vector<float> v(center.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(center[i] + sigma * gaussian(rng));
  return v;
}

/// Point at exactly `radius` from `center` in a random direction.
inline std::vector<float> on_sphere(const std::vector<double>& center, double radius, patchad::Rng& rng) {
  std::vector<double> dir(center.size());
  double norm = 0.0;
  for (auto& d : dir) {
    d = gaussian(rng);
    norm += d * d;
  }
  norm = std::sqrt(norm);
  std::vector<float> v(center.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(center[i] + radius * dir[i] / norm);
  return v;
}

/// Two Gaussian clusters with spreads sigma and 4 sigma. Test images are
/// 2x2 patch grids with two patches from each cluster; anomalous images
/// replace one patch by a point at the same offset from its cluster's center.
struct DensityBias {
  static constexpr std::size_t kDim = 4;
  static constexpr double kSigma = 0.1;
  static constexpr double kOffset = 0.6;

  oracle::Rows bank;
  std::vector<oracle::Rows> images;  // 4 patches each
  std::vector<int> labels;

  explicit DensityBias(std::uint64_t seed = 2024, std::size_t per_cluster = 300, std::size_t images_per_cluster = 60) {
    patchad::Rng rng(seed);
    const std::vector<double> tight(kDim, 0.0);
    const std::vector<double> loose(kDim, 10.0);
    for (std::size_t i = 0; i < per_cluster; ++i) bank.push_back(around(tight, kSigma, rng));
    for (std::size_t i = 0; i < per_cluster; ++i) bank.push_back(around(loose, 4 * kSigma, rng));
    // every image mixes both regions: patches 0, 1 from the tight cluster,
    // 2, 3 from the loose one; anomalies alternate between the two
    for (std::size_t i = 0; i < 2 * images_per_cluster; ++i) {
      oracle::Rows img;
      for (int p = 0; p < 2; ++p) img.push_back(around(tight, kSigma, rng));
      for (int p = 0; p < 2; ++p) img.push_back(around(loose, 4 * kSigma, rng));
      const int label = static_cast<int>(i % 2);
      if (label) {
        const bool in_tight = (i / 2) % 2 == 0;
        img[in_tight ? rng.below(2) : 2 + rng.below(2)] = on_sphere(in_tight ? tight : loose, kOffset, rng);
      }
      images.push_back(std::move(img));
      labels.push_back(label);
    }
  }

  patchad::PatchFeatureSet patches(std::size_t i) const {
    patchad::PatchFeatureSet set{2, 2, kDim, {}};
    for (const auto& r : images[i]) set.vectors.insert(set.vectors.end(), r.begin(), r.end());
    return set;
  }
};

}  // namespace fixture
