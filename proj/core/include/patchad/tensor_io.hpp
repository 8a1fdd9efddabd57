#pragma once

// Binary tensor container (.rebf).
//
// Layout, all integers little-endian:
//   magic    4 bytes  "REBF"
//   version  u32      1
//   dtype    u8       0 = float32 little-endian
//   ndim     u8       1..4
//   dims     ndim x u32
//   payload  prod(dims) x float32
//
// A file may hold several tensors back to back; memory-bank files use this
// (see feature_bank.hpp).

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace patchad {

inline constexpr std::array<char, 4> kTensorMagic{'R', 'E', 'B', 'F'};
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::uint8_t kDTypeFloat32 = 0;
inline constexpr std::size_t kMaxTensorRank = 4;

/// Size in bytes of a header with `ndim` dimensions.
constexpr std::size_t tensor_header_size(std::size_t ndim) noexcept {
  return kTensorMagic.size() + sizeof(std::uint32_t) + 2 + ndim * sizeof(std::uint32_t);
}

/// Rank-generic tensor as stored on disk.
struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const noexcept;
};

/// C x H x W activation block, row-major with the channel index outermost.
struct FeatureTensor {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> data;

  FeatureTensor() = default;
  FeatureTensor(std::size_t c, std::size_t h, std::size_t w, float fill = 0.0f);
  FeatureTensor(std::size_t c, std::size_t h, std::size_t w, std::vector<float> values);

  std::size_t offset(std::size_t c, std::size_t h, std::size_t w) const noexcept {
    return (c * height + h) * width + w;
  }
  float at(std::size_t c, std::size_t h, std::size_t w) const noexcept { return data[offset(c, h, w)]; }
  float& at(std::size_t c, std::size_t h, std::size_t w) noexcept { return data[offset(c, h, w)]; }

  std::span<const float> plane(std::size_t c) const noexcept {
    return std::span<const float>(data).subspan(c * height * width, height * width);
  }

  /// Throws DimensionError / DataError when the invariants do not hold.
  void validate() const;
};

void write_raw_tensor(const RawTensor& t, std::ostream& out);
RawTensor read_raw_tensor(std::istream& in);

void write_tensor(const FeatureTensor& t, std::ostream& out);
/// Reads a rank-3 tensor. Rank 2 (H x W) is accepted as a single channel.
FeatureTensor read_tensor(std::istream& in);

void save_tensor(const FeatureTensor& t, const std::filesystem::path& path);
FeatureTensor load_tensor(const std::filesystem::path& path);
void save_raw_tensor(const RawTensor& t, const std::filesystem::path& path);
RawTensor load_raw_tensor(const std::filesystem::path& path);

}  // namespace patchad
