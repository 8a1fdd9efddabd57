#pragma once

// Sample manifests (.rebm): UTF-8 text, one row per line,
// tab-separated `image_path<TAB>label[<TAB>mask_path]`.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace patchad {

struct SampleManifestRow {
  std::string image_path;
  unsigned label = 0;
  std::string mask_path;  // empty when the sample has no mask

  bool operator==(const SampleManifestRow&) const = default;
};

struct ManifestOptions {
  /// Labels must be < class_count.
  unsigned class_count = 7;
  /// When set, image and mask paths are required to exist; relative paths
  /// are resolved against this directory.
  std::optional<std::filesystem::path> check_files_under;
};

/// Blank lines are skipped. Rows with fewer than two fields raise
/// FormatError naming the 1-based line number.
std::vector<SampleManifestRow> parse_manifest(std::istream& in, const ManifestOptions& opts = {});
void write_manifest(const std::vector<SampleManifestRow>& rows, std::ostream& out);

/// Reads a manifest file; existence checks resolve relative to its directory.
std::vector<SampleManifestRow> load_manifest(const std::filesystem::path& path, unsigned class_count = 7,
                                             bool check_files = true);
void save_manifest(const std::vector<SampleManifestRow>& rows, const std::filesystem::path& path);

}  // namespace patchad
