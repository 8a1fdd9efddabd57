#pragma once

// Single-plane resampling helpers shared by feature aggregation and
// pixel-map upsampling. Planes are row-major H x W.

#include <cstddef>
#include <span>
#include <vector>

namespace patchad {

/// Bilinear resize with half-pixel centers (corner alignment off). Source
/// coordinates are clamped to the plane, so constants are preserved.
std::vector<double> bilinear_resize(std::span<const double> src, std::size_t height, std::size_t width,
                                    std::size_t out_height, std::size_t out_width);

/// Stride-1 box mean over a `window` x `window` neighborhood; out-of-range
/// taps replicate the nearest edge pixel. `window` must be odd.
std::vector<double> box_mean(std::span<const double> src, std::size_t height, std::size_t width,
                             std::size_t window);

/// Separable Gaussian blur, kernel radius ceil(3 sigma), edge replication.
/// sigma == 0 returns the input unchanged.
std::vector<double> gaussian_blur(std::span<const double> src, std::size_t height, std::size_t width,
                                  double sigma);

}  // namespace patchad
