#include "patchad/feature_bank.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "le_bytes.hpp"
#include "patchad/errors.hpp"
#include "patchad/interpolate.hpp"
#include "patchad/neighbors.hpp"

namespace patchad {

void PatchFeatureSet::validate() const {
  if (grid_height == 0 || grid_width == 0 || dim == 0) {
    throw DimensionError("patch feature set dims must be positive");
  }
  if (vectors.size() != rows() * dim) {
    throw DimensionError("patch feature set holds " + std::to_string(vectors.size()) + " values, expected " +
                         std::to_string(rows() * dim));
  }
  for (float v : vectors) {
    if (!std::isfinite(v)) throw DataError("non-finite patch feature value");
  }
}

MemoryBank::MemoryBank(std::size_t dim, std::vector<float> entries)
    : dim_(dim), size_(dim == 0 ? 0 : entries.size() / dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw DimensionError("memory bank dim must be positive");
  if (entries_.size() % dim_ != 0) {
    throw DimensionError(std::to_string(entries_.size()) + " values do not form rows of dim " + std::to_string(dim_));
  }
  if (size_ == 0) throw EmptinessError("memory bank must hold at least one entry");
}

LocalDensityBank::LocalDensityBank(MemoryBank bank, std::vector<float> densities, std::size_t k_used)
    : bank_(std::move(bank)), densities_(std::move(densities)), k_used_(k_used) {
  if (densities_.size() != bank_.size()) {
    throw ConsistencyError("density count " + std::to_string(densities_.size()) + " does not match bank size " +
                           std::to_string(bank_.size()));
  }
  if (k_used_ == 0 || k_used_ >= bank_.size()) {
    throw ConsistencyError("k_used = " + std::to_string(k_used_) + " must be in 1.." +
                           std::to_string(bank_.size() - 1));
  }
  for (float d : densities_) {
    if (!std::isfinite(d) || d < 0.0f) throw DataError("local densities must be finite and non-negative");
  }
}

PatchFeatureSet aggregate_hierarchies(const FeatureTensor& phi2, const FeatureTensor& phi3, std::size_t pool_window) {
  phi2.validate();
  phi3.validate();
  if (phi3.height > phi2.height || phi3.width > phi2.width) {
    throw DimensionError("hierarchy-3 grid " + std::to_string(phi3.height) + "x" + std::to_string(phi3.width) +
                         " exceeds hierarchy-2 grid " + std::to_string(phi2.height) + "x" +
                         std::to_string(phi2.width));
  }

  const std::size_t h = phi2.height;
  const std::size_t w = phi2.width;
  const std::size_t dim = phi2.channels + phi3.channels;

  PatchFeatureSet out{h, w, dim, std::vector<float>(h * w * dim)};

  auto scatter = [&](const std::vector<double>& plane, std::size_t channel) {
    for (std::size_t p = 0; p < h * w; ++p) out.vectors[p * dim + channel] = static_cast<float>(plane[p]);
  };

  for (std::size_t c = 0; c < phi2.channels; ++c) {
    const auto plane = phi2.plane(c);
    const std::vector<double> src(plane.begin(), plane.end());
    scatter(box_mean(src, h, w, pool_window), c);
  }
  for (std::size_t c = 0; c < phi3.channels; ++c) {
    const auto plane = phi3.plane(c);
    const std::vector<double> src(plane.begin(), plane.end());
    const auto pooled = box_mean(src, phi3.height, phi3.width, pool_window);
    scatter(bilinear_resize(pooled, phi3.height, phi3.width, h, w), phi2.channels + c);
  }
  return out;
}

MemoryBank build_memory_bank(std::span<const PatchFeatureSet> sets) {
  if (sets.empty()) throw EmptinessError("cannot build a memory bank from zero feature sets");
  const std::size_t dim = sets.front().dim;
  std::size_t total = 0;
  for (const auto& s : sets) {
    s.validate();
    if (s.dim != dim) {
      throw DimensionError("mixed feature dims in memory bank: " + std::to_string(dim) + " and " +
                           std::to_string(s.dim));
    }
    total += s.vectors.size();
  }
  std::vector<float> entries;
  entries.reserve(total);
  for (const auto& s : sets) entries.insert(entries.end(), s.vectors.begin(), s.vectors.end());
  return MemoryBank(dim, std::move(entries));
}

LocalDensityBank learn_local_density(const MemoryBank& bank, std::size_t k) {
  if (k == 0 || k >= bank.size()) {
    throw ParameterError("density K = " + std::to_string(k) + " must be in 1.." + std::to_string(bank.size() - 1) +
                         " for a bank of " + std::to_string(bank.size()) + " entries");
  }
  const auto neighbors = all_k_nearest(bank, k);
  std::vector<float> densities(bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i) {
    double sum = 0.0;
    for (const auto& nb : neighbors[i]) sum += nb.distance;
    densities[i] = static_cast<float>(sum / static_cast<double>(k));
  }
  return LocalDensityBank(bank, std::move(densities), k);
}

void write_memory_bank(const MemoryBank& bank, std::ostream& out) {
  const auto d = bank.data();
  write_raw_tensor({{static_cast<std::uint32_t>(bank.size()), static_cast<std::uint32_t>(bank.dim())},
                    std::vector<float>(d.begin(), d.end())},
                   out);
}

MemoryBank read_memory_bank(std::istream& in) {
  RawTensor t = read_raw_tensor(in);
  if (t.dims.size() != 2) {
    throw DimensionError("bank tensor must be N x D (rank 2), got rank " + std::to_string(t.dims.size()));
  }
  return MemoryBank(t.dims[1], std::move(t.data));
}

void write_bank(const LocalDensityBank& bank, std::ostream& out) {
  write_memory_bank(bank.bank(), out);
  const auto d = bank.densities();
  write_raw_tensor({{static_cast<std::uint32_t>(d.size())}, std::vector<float>(d.begin(), d.end())}, out);
  detail::put_u32(out, static_cast<std::uint32_t>(bank.k_used()));
  if (!out) throw IoError("failed writing bank");
}

LocalDensityBank read_bank(std::istream& in) {
  MemoryBank bank = read_memory_bank(in);
  if (in.peek() == std::char_traits<char>::eof()) {
    throw ConsistencyError("bank file has no density tensor; run density learning first");
  }
  RawTensor densities = read_raw_tensor(in);
  if (densities.dims.size() != 1) {
    throw ConsistencyError("density tensor must be rank 1, got rank " + std::to_string(densities.dims.size()));
  }
  if (densities.data.size() != bank.size()) {
    throw ConsistencyError("density tensor length " + std::to_string(densities.data.size()) +
                           " does not match bank size " + std::to_string(bank.size()));
  }
  const std::uint32_t k = detail::get_u32(in, "bank k_used trailer");
  return LocalDensityBank(std::move(bank), std::move(densities.data), k);
}

namespace {

template <typename Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const LengthError& e) {
    throw LengthError(path.string() + ": " + e.what());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(path.string() + ": " + e.what());
  }
}

}  // namespace

void save_memory_bank(const MemoryBank& bank, const std::filesystem::path& path) {
  with_file(path, [&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing");
    write_memory_bank(bank, out);
  });
}

MemoryBank load_memory_bank(const std::filesystem::path& path) {
  return with_file(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading");
    return read_memory_bank(in);
  });
}

void save_bank(const LocalDensityBank& bank, const std::filesystem::path& path) {
  with_file(path, [&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing");
    write_bank(bank, out);
  });
}

LocalDensityBank load_bank(const std::filesystem::path& path) {
  return with_file(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading");
    return read_bank(in);
  });
}

}  // namespace patchad
