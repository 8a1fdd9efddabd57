#include "patchad/tensor_io.hpp"

#include <cmath>
#include <fstream>

#include "le_bytes.hpp"
#include "patchad/errors.hpp"

namespace patchad {

namespace {

std::size_t product(std::span<const std::uint32_t> dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void check_finite(std::span<const float> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite tensor value at element " + std::to_string(i));
    }
  }
}

template <typename Fn>
auto with_path_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const LengthError& e) {
    throw LengthError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::size_t RawTensor::element_count() const noexcept { return product(dims); }

FeatureTensor::FeatureTensor(std::size_t c, std::size_t h, std::size_t w, float fill)
    : channels(c), height(h), width(w), data(c * h * w, fill) {}

FeatureTensor::FeatureTensor(std::size_t c, std::size_t h, std::size_t w, std::vector<float> values)
    : channels(c), height(h), width(w), data(std::move(values)) {
  validate();
}

void FeatureTensor::validate() const {
  if (channels == 0 || height == 0 || width == 0) {
    throw DimensionError("feature tensor dims must be positive, got " + std::to_string(channels) + "x" +
                         std::to_string(height) + "x" + std::to_string(width));
  }
  if (data.size() != channels * height * width) {
    throw DimensionError("feature tensor holds " + std::to_string(data.size()) + " values, expected " +
                         std::to_string(channels * height * width));
  }
  check_finite(data);
}

void write_raw_tensor(const RawTensor& t, std::ostream& out) {
  if (t.dims.empty() || t.dims.size() > kMaxTensorRank) {
    throw DimensionError("tensor rank must be in 1..4, got " + std::to_string(t.dims.size()));
  }
  if (t.element_count() != t.data.size()) {
    throw DimensionError("tensor dims describe " + std::to_string(t.element_count()) + " elements but " +
                         std::to_string(t.data.size()) + " are present");
  }
  check_finite(t.data);

  out.write(kTensorMagic.data(), kTensorMagic.size());
  detail::put_u32(out, kTensorVersion);
  out.put(static_cast<char>(kDTypeFloat32));
  out.put(static_cast<char>(t.dims.size()));
  for (auto d : t.dims) detail::put_u32(out, d);
  for (float v : t.data) detail::put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw IoError("failed writing tensor");
}

RawTensor read_raw_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  detail::read_exact(in, magic.data(), 4, "tensor header");
  if (magic != kTensorMagic) {
    throw FormatError("bad magic '" + std::string(magic.data(), 4) + "', expected 'REBF'");
  }
  const std::uint32_t version = detail::get_u32(in, "tensor header");
  if (version != kTensorVersion) {
    throw FormatError("unsupported tensor version " + std::to_string(version) + ", expected " +
                      std::to_string(kTensorVersion));
  }
  std::array<char, 2> codes{};
  detail::read_exact(in, codes.data(), 2, "tensor header");
  const auto dtype = static_cast<std::uint8_t>(codes[0]);
  const auto ndim = static_cast<std::uint8_t>(codes[1]);
  if (dtype != kDTypeFloat32) throw FormatError("unsupported dtype code " + std::to_string(dtype));
  if (ndim < 1 || ndim > kMaxTensorRank) throw FormatError("tensor rank must be in 1..4, got " + std::to_string(ndim));

  RawTensor t;
  t.dims.resize(ndim);
  for (auto& d : t.dims) d = detail::get_u32(in, "tensor header");

  const std::size_t count = t.element_count();
  std::vector<unsigned char> bytes(count * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got != bytes.size()) {
    throw LengthError("truncated tensor payload: expected " + std::to_string(count) + " elements (" +
                      std::to_string(bytes.size()) + " bytes), got " + std::to_string(got) + " bytes");
  }
  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    t.data[i] = std::bit_cast<float>(detail::decode_u32(&bytes[4 * i]));
  }
  check_finite(t.data);
  return t;
}

void write_tensor(const FeatureTensor& t, std::ostream& out) {
  t.validate();
  RawTensor raw{{static_cast<std::uint32_t>(t.channels), static_cast<std::uint32_t>(t.height),
                 static_cast<std::uint32_t>(t.width)},
                t.data};
  write_raw_tensor(raw, out);
}

FeatureTensor read_tensor(std::istream& in) {
  RawTensor raw = read_raw_tensor(in);
  if (raw.dims.size() == 2) raw.dims.insert(raw.dims.begin(), 1u);
  if (raw.dims.size() != 3) {
    throw DimensionError("expected a C x H x W tensor, got rank " + std::to_string(raw.dims.size()));
  }
  return FeatureTensor(raw.dims[0], raw.dims[1], raw.dims[2], std::move(raw.data));
}

void save_tensor(const FeatureTensor& t, const std::filesystem::path& path) {
  with_path_context(path, [&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing");
    write_tensor(t, out);
    out.close();
    if (!out) throw IoError("write failed");
  });
}

FeatureTensor load_tensor(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading");
    return read_tensor(in);
  });
}

void save_raw_tensor(const RawTensor& t, const std::filesystem::path& path) {
  with_path_context(path, [&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing");
    write_raw_tensor(t, out);
    out.close();
    if (!out) throw IoError("write failed");
  });
}

RawTensor load_raw_tensor(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading");
    return read_raw_tensor(in);
  });
}

}  // namespace patchad
