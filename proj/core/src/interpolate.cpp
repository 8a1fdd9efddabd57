#include "patchad/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "patchad/errors.hpp"

namespace patchad {

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;  // weight of `hi`
};

std::vector<Tap> half_pixel_taps(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t i = 0; i < out; ++i) {
    double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const auto lo = static_cast<std::size_t>(std::floor(src));
    const auto hi = std::min(lo + 1, in - 1);
    taps[i] = {lo, hi, src - static_cast<double>(lo)};
  }
  return taps;
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

void check_plane(std::span<const double> src, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw DimensionError("plane dims must be positive");
  if (src.size() != height * width) {
    throw DimensionError("plane holds " + std::to_string(src.size()) + " values, expected " +
                         std::to_string(height * width));
  }
}

}  // namespace

std::vector<double> bilinear_resize(std::span<const double> src, std::size_t height, std::size_t width,
                                    std::size_t out_height, std::size_t out_width) {
  check_plane(src, height, width);
  if (out_height == 0 || out_width == 0) throw ParameterError("resize target dims must be positive");

  const auto ys = half_pixel_taps(height, out_height);
  const auto xs = half_pixel_taps(width, out_width);
  std::vector<double> out(out_height * out_width);
  for (std::size_t oy = 0; oy < out_height; ++oy) {
    const auto& ty = ys[oy];
    const double* r0 = src.data() + ty.lo * width;
    const double* r1 = src.data() + ty.hi * width;
    for (std::size_t ox = 0; ox < out_width; ++ox) {
      const auto& tx = xs[ox];
      const double top = r0[tx.lo] + (r0[tx.hi] - r0[tx.lo]) * tx.frac;
      const double bottom = r1[tx.lo] + (r1[tx.hi] - r1[tx.lo]) * tx.frac;
      out[oy * out_width + ox] = top + (bottom - top) * ty.frac;
    }
  }
  return out;
}

std::vector<double> box_mean(std::span<const double> src, std::size_t height, std::size_t width,
                             std::size_t window) {
  check_plane(src, height, width);
  if (window == 0 || window % 2 == 0) {
    throw ParameterError("pooling window must be odd and positive, got " + std::to_string(window));
  }
  if (window == 1) return {src.begin(), src.end()};

  const auto r = static_cast<std::ptrdiff_t>(window / 2);
  const double norm = 1.0 / static_cast<double>(window);

  // separable: rows then columns
  std::vector<double> tmp(src.size());
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -r; d <= r; ++d) {
        acc += src[y * width + clamp_index(static_cast<std::ptrdiff_t>(x) + d, width)];
      }
      tmp[y * width + x] = acc * norm;
    }
  }
  std::vector<double> out(src.size());
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -r; d <= r; ++d) {
        acc += tmp[clamp_index(static_cast<std::ptrdiff_t>(y) + d, height) * width + x];
      }
      out[y * width + x] = acc * norm;
    }
  }
  return out;
}

std::vector<double> gaussian_blur(std::span<const double> src, std::size_t height, std::size_t width,
                                  double sigma) {
  check_plane(src, height, width);
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("blur sigma must be finite and >= 0");
  if (sigma == 0.0) return {src.begin(), src.end()};

  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
    const double w = std::exp(-0.5 * static_cast<double>(d * d) / (sigma * sigma));
    kernel[static_cast<std::size_t>(d + radius)] = w;
    total += w;
  }
  for (auto& w : kernel) w /= total;

  std::vector<double> tmp(src.size());
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] *
               src[y * width + clamp_index(static_cast<std::ptrdiff_t>(x) + d, width)];
      }
      tmp[y * width + x] = acc;
    }
  }
  std::vector<double> out(src.size());
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] *
               tmp[clamp_index(static_cast<std::ptrdiff_t>(y) + d, height) * width + x];
      }
      out[y * width + x] = acc;
    }
  }
  return out;
}

}  // namespace patchad
