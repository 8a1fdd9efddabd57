#include "patchad/manifest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "patchad/errors.hpp"

namespace patchad {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

void require_exists(const std::filesystem::path& base, const std::string& rel, std::size_t line_no) {
  const std::filesystem::path p(rel);
  const auto resolved = p.is_absolute() ? p : base / p;
  if (!std::filesystem::exists(resolved)) {
    throw IoError("manifest line " + std::to_string(line_no) + ": file not found: " + resolved.string());
  }
}

}  // namespace

std::vector<SampleManifestRow> parse_manifest(std::istream& in, const ManifestOptions& opts) {
  std::vector<SampleManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split_tabs(line);
    if (fields.size() < 2) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected at least 2 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    if (fields.size() > 3) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected at most 3 fields, got " +
                        std::to_string(fields.size()));
    }

    SampleManifestRow row;
    row.image_path = fields[0];
    const auto& label = fields[1];
    const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), row.label);
    if (ec != std::errc{} || ptr != label.data() + label.size() || label.empty()) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": label '" + label +
                        "' is not a non-negative integer");
    }
    if (row.label >= opts.class_count) {
      throw DataError("manifest line " + std::to_string(line_no) + ": label " + std::to_string(row.label) +
                      " is not below class count " + std::to_string(opts.class_count));
    }
    if (fields.size() == 3) row.mask_path = fields[2];
    if (row.image_path.empty()) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": empty image path");
    }

    if (opts.check_files_under) {
      require_exists(*opts.check_files_under, row.image_path, line_no);
      if (!row.mask_path.empty()) require_exists(*opts.check_files_under, row.mask_path, line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_manifest(const std::vector<SampleManifestRow>& rows, std::ostream& out) {
  for (const auto& r : rows) {
    out << r.image_path << '\t' << r.label;
    if (!r.mask_path.empty()) out << '\t' << r.mask_path;
    out << '\n';
  }
  if (!out) throw IoError("failed writing manifest");
}

std::vector<SampleManifestRow> load_manifest(const std::filesystem::path& path, unsigned class_count,
                                             bool check_files) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open manifest");
  ManifestOptions opts{class_count, std::nullopt};
  if (check_files) opts.check_files_under = path.parent_path();
  try {
    return parse_manifest(in, opts);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_manifest(const std::vector<SampleManifestRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open manifest for writing");
  write_manifest(rows, out);
}

}  // namespace patchad
