#pragma once

// 8-bit raster images and binary masks, stored on disk as binary netpbm
// (P5 grayscale / P6 RGB), which is lossless.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace patchad {

struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;  // 1 or 3
  std::vector<std::uint8_t> pixels;  // interleaved, row-major

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t c, std::uint8_t fill = 0)
      : height(h), width(w), channels(c), pixels(h * w * c, fill) {}

  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) noexcept {
    return pixels[(y * width + x) * channels + c];
  }
  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const noexcept {
    return pixels[(y * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

/// Tight axis-aligned box; w == 0 means empty.
struct BoundingBox {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  bool operator==(const BoundingBox&) const = default;
};

struct BinaryMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1, row-major

  BinaryMask() = default;
  BinaryMask(std::size_t h, std::size_t w, std::uint8_t fill = 0) : height(h), width(w), bits(h * w, fill) {}

  bool test(std::size_t y, std::size_t x) const noexcept { return bits[y * width + x] != 0; }
  void set(std::size_t y, std::size_t x, bool on = true) noexcept { bits[y * width + x] = on ? 1 : 0; }
  std::size_t count() const noexcept;
  BoundingBox bounds() const noexcept;

  bool operator==(const BinaryMask&) const = default;
};

Image read_pnm(const std::filesystem::path& path);
void write_pnm(const Image& image, const std::filesystem::path& path);

/// Any nonzero pixel of a P5 file is set.
BinaryMask read_mask(const std::filesystem::path& path);
/// Written as P5 with values 0 / 255.
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);

}  // namespace patchad
