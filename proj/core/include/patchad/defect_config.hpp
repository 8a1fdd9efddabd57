#pragma once

// DefectConfig and its flat key=value text form.
//
//   # comment
//   shapes = blob, scar, clump        # also: rect, rectscar
//   fills = noise, cutpaste
//   fuse = paste, blend
//   include_normal = true
//   area_min = 0.002                  # fraction of image area
//   area_max = 0.05
//   scar_aspect_min = 3               # long side / short side
//   scar_aspect_max = 10
//   rect_aspect_min = 1
//   rect_aspect_max = 3.3
//   scar_radius_min = 0               # brush radius in pixels; width = 2r+1
//   scar_radius_max = 2
//   clump_radius_min = 4
//   clump_radius_max = 9
//   noise_mean_min = 16               # pixel values, 0..255
//   noise_mean_max = 240
//   noise_fluctuation_min = 0
//   noise_fluctuation_max = 64
//   blend_min = 0.3                   # blend weight of the fill, (0, 1]
//   blend_max = 0.9
//   control_points_min = 4
//   control_points_max = 8
//   curve_samples = 128
//   retry_budget = 64
//   self_donor = false
//
// Unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace patchad {

enum class ShapeKind { kBezierBlob, kBezierScar, kBezierClump, kRect, kRectScar };
enum class FillKind { kNoise, kCutPaste };
enum class FuseMode { kPaste, kBlend };

std::string_view to_string(ShapeKind k) noexcept;
std::string_view to_string(FillKind k) noexcept;
std::string_view to_string(FuseMode m) noexcept;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

struct DefectConfig {
  std::vector<ShapeKind> shapes{ShapeKind::kBezierBlob, ShapeKind::kBezierScar, ShapeKind::kBezierClump};
  std::vector<FillKind> fills{FillKind::kNoise, FillKind::kCutPaste};
  std::vector<FuseMode> fuse_modes{FuseMode::kPaste, FuseMode::kBlend};
  bool include_normal = true;

  Interval area{0.002, 0.05};
  Interval scar_aspect{3.0, 10.0};
  Interval rect_aspect{1.0, 3.3};
  Interval scar_radius{0.0, 2.0};
  Interval clump_radius{4.0, 9.0};
  Interval noise_mean{16.0, 240.0};
  Interval noise_fluctuation{0.0, 64.0};
  Interval blend_weight{0.3, 0.9};
  std::size_t control_points_min = 4;
  std::size_t control_points_max = 8;
  std::size_t curve_samples = 128;
  std::size_t retry_budget = 64;
  bool self_donor = false;

  /// Throws ParameterError naming the offending field.
  void validate() const;

  bool operator==(const DefectConfig&) const = default;
};

DefectConfig parse_defect_config(std::istream& in);
DefectConfig load_defect_config(const std::filesystem::path& path);
void write_defect_config(const DefectConfig& cfg, std::ostream& out);

}  // namespace patchad
