#pragma once

// Synthetic defect generation: shape -> fill -> saliency-constrained
// placement -> paste/blend fusing.
//
// Class labels follow a 3 x 2 taxonomy plus the normal class:
//   label = 1 + 2 * shape_slot + fill_index, 0 = unmodified normal
// with shape slots blob = 0, scar = 1, clump = 2 and fill indices
// noise = 0, cut-paste = 1. Rect and RectScar (rectangle ablations) occupy
// the blob and scar slots respectively.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "patchad/defect_config.hpp"
#include "patchad/image.hpp"
#include "patchad/rng.hpp"

namespace patchad {

inline constexpr unsigned kSynthClassCount = 7;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// Shape drawn on a canvas of the target image's size, with its tight box.
struct ShapeMask {
  BinaryMask mask;
  BoundingBox bbox;

  /// The bbox-sized window of `mask`.
  BinaryMask crop() const;
};

/// Top-left corner of the shape's bounding box in the target image.
struct Offset {
  std::size_t x = 0;
  std::size_t y = 0;

  bool operator==(const Offset&) const = default;
};

struct SynthSample {
  Image image;
  BinaryMask mask;  // full frame
  unsigned label = 0;
};

unsigned shape_slot(ShapeKind kind) noexcept;
unsigned defect_label(ShapeKind shape, FillKind fill) noexcept;

/// de Casteljau evaluation at `samples` uniform parameters in [0, 1].
std::vector<Point2> bezier_curve_points(std::span<const Point2> control, std::size_t samples);

// Raster helpers, exposed for testing.
void fill_polygon(BinaryMask& mask, std::span<const Point2> closed_outline);
void stamp_polyline(BinaryMask& mask, std::span<const Point2> polyline, int radius);
BinaryMask erode_cross(const BinaryMask& mask);
/// 8-connected components.
std::size_t count_components(const BinaryMask& mask);
/// Erodes with a 3x3 cross until the mask splits into >= 2 components.
/// nullopt when it empties first.
std::optional<BinaryMask> erode_until_split(const BinaryMask& mask);
/// w = round(sqrt(area * aspect)), h = round(sqrt(area / aspect)), both >= 1.
std::pair<std::size_t, std::size_t> rect_dims(double area_px, double aspect);

// Shape generators. `height` x `width` is the target frame. Every generator
// retries up to cfg.retry_budget times and throws GenerationError when the
// area (and for scars, aspect) constraints cannot be met.
ShapeMask gen_bezier_blob(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng);
ShapeMask gen_bezier_scar(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng);
ShapeMask gen_bezier_clump(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng);
ShapeMask gen_rect_shape(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng, bool scar);
ShapeMask gen_shape(ShapeKind kind, std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng);

/// Uniform noise in [mean - fluctuation, mean + fluctuation], rounded and
/// clamped to 0..255, over the shape's bounding box.
Image gen_noise_fill(const ShapeMask& shape, double mean, double fluctuation, std::size_t channels, Rng& rng);
/// Draws mean and fluctuation from the config ranges.
Image gen_noise_fill(const ShapeMask& shape, const DefectConfig& cfg, std::size_t channels, Rng& rng);
/// Random bbox-sized crop of `donor`. Throws SizeError if the donor is smaller.
Image gen_cutpaste_fill(const ShapeMask& shape, const Image& donor, Rng& rng);

/// Uniformly random offset keeping every shape pixel inside `saliency`
/// (whole frame when absent). Rejection sampling first, exhaustive
/// enumeration as fallback; PlacementError when no offset is feasible.
Offset place_defect(const ShapeMask& shape, std::size_t height, std::size_t width, const BinaryMask* saliency,
                    Rng& rng, std::size_t retry_budget = 64);

/// Writes `fill` into `image` where `local_mask` (bbox-sized) is set, at
/// `offset`. PASTE copies the fill; BLEND uses round(beta*fill + (1-beta)*bg).
Image fuse_defect(const Image& image, const Image& fill, const BinaryMask& local_mask, Offset offset, FuseMode mode,
                  double beta);

/// Picks a class uniformly among the enabled ones and synthesizes it.
/// `donor` feeds cut-paste fills; absent (or cfg.self_donor) uses `image`.
SynthSample make_sample(const Image& image, const BinaryMask* saliency, const Image* donor, const DefectConfig& cfg,
                        Rng& rng);
SynthSample make_defect_sample(const Image& image, const BinaryMask* saliency, const Image* donor,
                               const DefectConfig& cfg, ShapeKind shape, FillKind fill, Rng& rng);

}  // namespace patchad
