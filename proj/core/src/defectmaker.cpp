#include "patchad/defectmaker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "patchad/errors.hpp"

namespace patchad {

namespace {

double area_fraction(const BinaryMask& m) {
  return static_cast<double>(m.count()) / static_cast<double>(m.height * m.width);
}

ShapeMask finish(BinaryMask mask) {
  const auto box = mask.bounds();
  return {std::move(mask), box};
}

void check_frame(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw DimensionError("target frame dims must be positive");
}

[[noreturn]] void exhausted(const char* what, const DefectConfig& cfg) {
  throw GenerationError(std::string(what) + ": no shape met area range [" + std::to_string(cfg.area.lo) + ", " +
                        std::to_string(cfg.area.hi) + "] within " + std::to_string(cfg.retry_budget) + " attempts");
}

int draw_radius(const Interval& r, Rng& rng) {
  return static_cast<int>(std::lround(rng.uniform(r.lo, std::nextafter(r.hi, r.hi + 1.0))));
}

void stamp_disc(BinaryMask& mask, long cx, long cy, int radius) {
  const long r = radius;
  for (long dy = -r; dy <= r; ++dy) {
    const long y = cy + dy;
    if (y < 0 || y >= static_cast<long>(mask.height)) continue;
    for (long dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > r * r) continue;
      const long x = cx + dx;
      if (x < 0 || x >= static_cast<long>(mask.width)) continue;
      mask.set(static_cast<std::size_t>(y), static_cast<std::size_t>(x));
    }
  }
}

// Integer DDA between two points; calls fn(x, y, t) at every step.
template <typename Fn>
void walk_segment(Point2 a, Point2 b, Fn&& fn) {
  const double ax = std::floor(a.x), ay = std::floor(a.y);
  const double bx = std::floor(b.x), by = std::floor(b.y);
  const auto steps = static_cast<long>(std::max(std::abs(bx - ax), std::abs(by - ay)));
  if (steps == 0) {
    fn(static_cast<long>(ax), static_cast<long>(ay), 0.0);
    return;
  }
  for (long s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    fn(static_cast<long>(std::lround(ax + (bx - ax) * t)), static_cast<long>(std::lround(ay + (by - ay) * t)), t);
  }
}

double shoelace(std::span<const Point2> pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::abs(twice) / 2.0;
}

struct Extent {
  double min_x, min_y, max_x, max_y;
};

Extent extent(std::span<const Point2> pts) {
  Extent e{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts) {
    e.min_x = std::min(e.min_x, p.x);
    e.min_y = std::min(e.min_y, p.y);
    e.max_x = std::max(e.max_x, p.x);
    e.max_y = std::max(e.max_y, p.y);
  }
  return e;
}

std::size_t draw_count(const DefectConfig& cfg, Rng& rng) {
  return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(cfg.control_points_min),
                                              static_cast<std::int64_t>(cfg.control_points_max)));
}

// Nudges a size multiplier toward the configured area range between attempts.
void adapt(double& scale, double achieved, const Interval& range) {
  if (achieved < range.lo) scale *= 1.25;
  else if (achieved > range.hi) scale /= 1.25;
}

}  // namespace

BinaryMask ShapeMask::crop() const {
  BinaryMask local(bbox.h, bbox.w);
  for (std::size_t y = 0; y < bbox.h; ++y) {
    for (std::size_t x = 0; x < bbox.w; ++x) local.set(y, x, mask.test(bbox.y + y, bbox.x + x));
  }
  return local;
}

unsigned shape_slot(ShapeKind kind) noexcept {
  switch (kind) {
    case ShapeKind::kBezierBlob:
    case ShapeKind::kRect: return 0;
    case ShapeKind::kBezierScar:
    case ShapeKind::kRectScar: return 1;
    case ShapeKind::kBezierClump: return 2;
  }
  return 0;
}

unsigned defect_label(ShapeKind shape, FillKind fill) noexcept {
  return 1 + 2 * shape_slot(shape) + (fill == FillKind::kNoise ? 0u : 1u);
}

std::vector<Point2> bezier_curve_points(std::span<const Point2> control, std::size_t samples) {
  if (control.size() < 2) throw ParameterError("a Bezier curve needs at least 2 control points");
  if (samples < 2) throw ParameterError("a Bezier curve needs at least 2 samples");

  std::vector<Point2> out;
  out.reserve(samples);
  std::vector<Point2> work(control.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(samples - 1);
    std::copy(control.begin(), control.end(), work.begin());
    for (std::size_t level = control.size() - 1; level > 0; --level) {
      for (std::size_t i = 0; i < level; ++i) {
        work[i] = {std::lerp(work[i].x, work[i + 1].x, t), std::lerp(work[i].y, work[i + 1].y, t)};
      }
    }
    out.push_back(work[0]);
  }
  return out;
}

void fill_polygon(BinaryMask& mask, std::span<const Point2> outline) {
  if (outline.size() < 3) return;
  std::vector<double> xs;
  for (std::size_t y = 0; y < mask.height; ++y) {
    const double yc = static_cast<double>(y) + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < outline.size(); ++i) {
      const auto& a = outline[i];
      const auto& b = outline[(i + 1) % outline.size()];
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const double first = std::max(0.0, std::ceil(xs[i] - 0.5));
      const double last = std::min(static_cast<double>(mask.width), std::ceil(xs[i + 1] - 0.5));
      for (double x = first; x < last; x += 1.0) mask.set(y, static_cast<std::size_t>(x));
    }
  }
}

void stamp_polyline(BinaryMask& mask, std::span<const Point2> polyline, int radius) {
  if (polyline.empty()) return;
  // 8-connected pixel chain; a pixel whose neighbors in the chain already
  // touch is a staircase corner and is dropped, so radius 0 stays one pixel thin
  std::vector<std::pair<long, long>> chain;
  auto push = [&chain](long x, long y, double) {
    const std::pair<long, long> p{x, y};
    if (!chain.empty() && chain.back() == p) return;
    if (chain.size() >= 2) {
      const auto& q = chain[chain.size() - 2];
      if (std::abs(q.first - x) <= 1 && std::abs(q.second - y) <= 1) {
        chain.back() = p;
        return;
      }
    }
    chain.push_back(p);
  };
  if (polyline.size() == 1) {
    push(static_cast<long>(std::floor(polyline[0].x)), static_cast<long>(std::floor(polyline[0].y)), 0.0);
  }
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) walk_segment(polyline[i], polyline[i + 1], push);
  for (const auto& [x, y] : chain) stamp_disc(mask, x, y, radius);
}

BinaryMask erode_cross(const BinaryMask& mask) {
  BinaryMask out(mask.height, mask.width);
  for (std::size_t y = 0; y < mask.height; ++y) {
    for (std::size_t x = 0; x < mask.width; ++x) {
      const bool keep = mask.test(y, x) && y > 0 && y + 1 < mask.height && x > 0 && x + 1 < mask.width &&
                        mask.test(y - 1, x) && mask.test(y + 1, x) && mask.test(y, x - 1) && mask.test(y, x + 1);
      out.set(y, x, keep);
    }
  }
  return out;
}

std::size_t count_components(const BinaryMask& mask) {
  std::vector<char> seen(mask.bits.size(), 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  for (std::size_t start = 0; start < mask.bits.size(); ++start) {
    if (!mask.bits[start] || seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const auto py = static_cast<long>(p / mask.width);
      const auto px = static_cast<long>(p % mask.width);
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          const long ny = py + dy, nx = px + dx;
          if (ny < 0 || nx < 0 || ny >= static_cast<long>(mask.height) || nx >= static_cast<long>(mask.width)) continue;
          const auto q = static_cast<std::size_t>(ny) * mask.width + static_cast<std::size_t>(nx);
          if (mask.bits[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return components;
}

std::optional<BinaryMask> erode_until_split(const BinaryMask& mask) {
  BinaryMask current = mask;
  while (true) {
    const auto n = count_components(current);
    if (n == 0) return std::nullopt;
    if (n >= 2) return current;
    current = erode_cross(current);
  }
}

std::pair<std::size_t, std::size_t> rect_dims(double area_px, double aspect) {
  const auto w = static_cast<std::size_t>(std::max(1L, std::lround(std::sqrt(area_px * aspect))));
  const auto h = static_cast<std::size_t>(std::max(1L, std::lround(std::sqrt(area_px / aspect))));
  return {w, h};
}

ShapeMask gen_bezier_blob(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng) {
  check_frame(height, width);
  cfg.validate();
  const double frame = static_cast<double>(height * width);
  double scale = 1.0;
  for (std::size_t attempt = 0; attempt < cfg.retry_budget; ++attempt) {
    const double target = std::max(1.0, rng.uniform(cfg.area.lo, cfg.area.hi) * frame) * scale;
    const std::size_t n = std::max<std::size_t>(3, draw_count(cfg, rng));

    // angle-sorted control points give a star-shaped, non-self-intersecting loop
    std::vector<double> angles(n);
    for (auto& a : angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    std::vector<Point2> ctrl(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rng.uniform(0.4, 1.0);
      ctrl[i] = {r * std::cos(angles[i]), r * std::sin(angles[i])};
    }

    // closed composite quadratic: each control point bends the segment
    // joining the midpoints of its two incident edges
    const std::size_t per_segment = std::max<std::size_t>(4, cfg.curve_samples / n);
    std::vector<Point2> outline;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& prev = ctrl[(i + n - 1) % n];
      const auto& cur = ctrl[i];
      const auto& next = ctrl[(i + 1) % n];
      const std::array<Point2, 3> seg{Point2{(prev.x + cur.x) / 2, (prev.y + cur.y) / 2}, cur,
                                      Point2{(cur.x + next.x) / 2, (cur.y + next.y) / 2}};
      const auto pts = bezier_curve_points(seg, per_segment);
      outline.insert(outline.end(), pts.begin(), pts.end() - 1);
    }

    const double unit_area = shoelace(outline);
    if (unit_area < 1e-9) continue;
    const double k = std::sqrt(target / unit_area);
    for (auto& p : outline) p = {p.x * k, p.y * k};
    const auto e = extent(outline);
    const double bw = e.max_x - e.min_x, bh = e.max_y - e.min_y;
    if (bw >= static_cast<double>(width) || bh >= static_cast<double>(height)) {
      scale /= 1.25;
      continue;
    }
    const double ox = rng.uniform(0.0, static_cast<double>(width) - bw) - e.min_x;
    const double oy = rng.uniform(0.0, static_cast<double>(height) - bh) - e.min_y;
    for (auto& p : outline) p = {p.x + ox, p.y + oy};

    BinaryMask mask(height, width);
    fill_polygon(mask, outline);
    std::vector<Point2> ring(outline);
    ring.push_back(outline.front());
    stamp_polyline(mask, ring, 0);
    const double frac = area_fraction(mask);
    if (mask.count() > 0 && cfg.area.contains(frac)) return finish(std::move(mask));
    adapt(scale, frac, cfg.area);
  }
  exhausted("bezier blob", cfg);
}

ShapeMask gen_bezier_scar(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng) {
  check_frame(height, width);
  cfg.validate();
  const double frame = static_cast<double>(height * width);
  double scale = 1.0;
  for (std::size_t attempt = 0; attempt < cfg.retry_budget; ++attempt) {
    const int radius = draw_radius(cfg.scar_radius, rng);
    const auto stroke = static_cast<double>(2 * radius + 1);
    const double aspect = rng.uniform(cfg.scar_aspect.lo, cfg.scar_aspect.hi);
    const double target = std::max(1.0, rng.uniform(cfg.area.lo, cfg.area.hi) * frame) * scale;
    const bool horizontal = rng.below(2) == 0;

    // long side from the stroke length needed to cover the target area
    const double long_est = target / (stroke * 1.2);
    const auto short_side =
        static_cast<std::size_t>(std::max<long>(2 * radius + 1, std::lround(long_est / aspect)));
    const auto long_side =
        static_cast<std::size_t>(std::max<long>(static_cast<long>(short_side), std::lround(short_side * aspect)));
    const double actual_aspect = static_cast<double>(long_side) / static_cast<double>(short_side);

    const std::size_t n = draw_count(cfg, rng);
    std::vector<Point2> ctrl(n);
    std::vector<double> along(n);
    for (auto& a : along) a = rng.uniform();
    std::sort(along.begin(), along.end());
    along.front() = 0.0;
    along.back() = 1.0;
    for (std::size_t i = 0; i < n; ++i) ctrl[i] = {along[i], rng.uniform()};

    const std::size_t w = horizontal ? long_side : short_side;
    const std::size_t h = horizontal ? short_side : long_side;
    if (!cfg.scar_aspect.contains(actual_aspect)) continue;
    if (w > width || h > height) {
      scale /= 1.25;
      continue;
    }

    auto curve = bezier_curve_points(ctrl, cfg.curve_samples);
    const auto e = extent(curve);
    const double span_u = e.max_x - e.min_x, span_v = e.max_y - e.min_y;
    const double r = static_cast<double>(radius);
    const double ox = static_cast<double>(rng.below(width - w + 1));
    const double oy = static_cast<double>(rng.below(height - h + 1));
    // fit the curve's own box to the rectangle inset by the brush radius so
    // the stroke touches all four sides
    for (auto& p : curve) {
      const double u = span_u > 1e-12 ? (p.x - e.min_x) / span_u : 0.5;
      const double v = span_v > 1e-12 ? (p.y - e.min_y) / span_v : 0.5;
      const double along_px = r + 0.5 + u * (static_cast<double>(long_side) - 1.0 - 2.0 * r);
      const double across_px = r + 0.5 + v * (static_cast<double>(short_side) - 1.0 - 2.0 * r);
      p = horizontal ? Point2{ox + along_px, oy + across_px} : Point2{ox + across_px, oy + along_px};
    }

    BinaryMask stroke_mask(height, width);
    stamp_polyline(stroke_mask, curve, radius);
    BinaryMask mask(height, width);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const auto yy = static_cast<std::size_t>(oy) + y, xx = static_cast<std::size_t>(ox) + x;
        mask.set(yy, xx, stroke_mask.test(yy, xx));
      }
    }
    const double frac = area_fraction(mask);
    if (mask.count() > 0 && cfg.area.contains(frac)) {
      auto shape = finish(std::move(mask));
      const auto box = shape.bbox;
      const double bbox_aspect = static_cast<double>(std::max(box.w, box.h)) / static_cast<double>(std::min(box.w, box.h));
      if (cfg.scar_aspect.contains(bbox_aspect)) return shape;
      continue;
    }
    adapt(scale, frac, cfg.area);
  }
  exhausted("bezier scar", cfg);
}

ShapeMask gen_bezier_clump(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng) {
  check_frame(height, width);
  cfg.validate();
  const double frame = static_cast<double>(height * width);
  double scale = 1.0;
  for (std::size_t attempt = 0; attempt < cfg.retry_budget; ++attempt) {
    const int r_max = std::max(1, draw_radius(cfg.clump_radius, rng));
    const double target = std::max(1.0, rng.uniform(cfg.area.lo, cfg.area.hi) * frame) * scale;
    const std::size_t n = draw_count(cfg, rng);

    // thick stroke with alternating bulges and necks so erosion splits it
    const double length = 2.5 * target / (1.4 * r_max);
    const double side = std::clamp(length / 1.5, 2.0 * r_max + 2.0, static_cast<double>(std::min(height, width)));
    const double ox = rng.uniform(0.0, static_cast<double>(width) - side);
    const double oy = rng.uniform(0.0, static_cast<double>(height) - side);
    std::vector<Point2> ctrl(n);
    for (auto& p : ctrl) p = {ox + rng.uniform(0.0, side), oy + rng.uniform(0.0, side)};

    const auto knots = static_cast<std::size_t>(rng.between(3, 6));
    std::vector<double> knot_radius(knots);
    for (std::size_t k = 0; k < knots; ++k) {
      knot_radius[k] = (k % 2 == 0) ? rng.uniform(0.75, 1.0) * r_max : rng.uniform(0.15, 0.4) * r_max;
    }

    const auto curve = bezier_curve_points(ctrl, cfg.curve_samples);
    BinaryMask mask(height, width);
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      walk_segment(curve[i], curve[i + 1], [&](long x, long y, double t) {
        const double pos = (static_cast<double>(i) + t) / static_cast<double>(curve.size() - 1) *
                           static_cast<double>(knots - 1);
        const auto k0 = std::min(static_cast<std::size_t>(pos), knots - 2);
        const double rr = std::lerp(knot_radius[k0], knot_radius[k0 + 1], pos - static_cast<double>(k0));
        stamp_disc(mask, x, y, static_cast<int>(std::lround(rr)));
      });
    }

    auto split = erode_until_split(mask);
    if (!split) continue;
    const double frac = area_fraction(*split);
    if (cfg.area.contains(frac)) return finish(std::move(*split));
    adapt(scale, frac, cfg.area);
  }
  exhausted("bezier clump", cfg);
}

ShapeMask gen_rect_shape(std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng, bool scar) {
  check_frame(height, width);
  cfg.validate();
  const double frame = static_cast<double>(height * width);
  const Interval& aspects = scar ? cfg.scar_aspect : cfg.rect_aspect;
  for (std::size_t attempt = 0; attempt < cfg.retry_budget; ++attempt) {
    const double target = std::max(1.0, rng.uniform(cfg.area.lo, cfg.area.hi) * frame);
    const double aspect = rng.uniform(aspects.lo, aspects.hi);
    auto [w, h] = rect_dims(target, aspect);
    if (rng.below(2) == 1) std::swap(w, h);
    if (scar && !aspects.contains(static_cast<double>(std::max(w, h)) / static_cast<double>(std::min(w, h)))) continue;
    if (w > width || h > height) continue;
    if (!cfg.area.contains(static_cast<double>(w * h) / frame)) continue;

    const std::size_t x0 = rng.below(width - w + 1);
    const std::size_t y0 = rng.below(height - h + 1);
    BinaryMask mask(height, width);
    for (std::size_t y = y0; y < y0 + h; ++y) {
      for (std::size_t x = x0; x < x0 + w; ++x) mask.set(y, x);
    }
    return finish(std::move(mask));
  }
  exhausted(scar ? "rect scar" : "rect", cfg);
}

ShapeMask gen_shape(ShapeKind kind, std::size_t height, std::size_t width, const DefectConfig& cfg, Rng& rng) {
  switch (kind) {
    case ShapeKind::kBezierBlob: return gen_bezier_blob(height, width, cfg, rng);
    case ShapeKind::kBezierScar: return gen_bezier_scar(height, width, cfg, rng);
    case ShapeKind::kBezierClump: return gen_bezier_clump(height, width, cfg, rng);
    case ShapeKind::kRect: return gen_rect_shape(height, width, cfg, rng, false);
    case ShapeKind::kRectScar: return gen_rect_shape(height, width, cfg, rng, true);
  }
  throw ParameterError("unknown shape kind");
}

Image gen_noise_fill(const ShapeMask& shape, double mean, double fluctuation, std::size_t channels, Rng& rng) {
  if (!(mean >= 0.0 && mean <= 255.0)) {
    throw ParameterError("noise mean " + std::to_string(mean) + " is outside the pixel range 0..255");
  }
  if (!(fluctuation >= 0.0) || !std::isfinite(fluctuation)) throw ParameterError("noise fluctuation must be >= 0");
  if (channels == 0) throw DimensionError("fill channel count must be positive");
  Image fill(shape.bbox.h, shape.bbox.w, channels);
  for (auto& px : fill.pixels) {
    const double v = fluctuation == 0.0 ? mean : mean + rng.uniform(-fluctuation, fluctuation);
    px = static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
  }
  return fill;
}

Image gen_noise_fill(const ShapeMask& shape, const DefectConfig& cfg, std::size_t channels, Rng& rng) {
  const double mean = rng.uniform(cfg.noise_mean.lo, cfg.noise_mean.hi);
  const double fluctuation = rng.uniform(cfg.noise_fluctuation.lo, cfg.noise_fluctuation.hi);
  return gen_noise_fill(shape, mean, fluctuation, channels, rng);
}

Image gen_cutpaste_fill(const ShapeMask& shape, const Image& donor, Rng& rng) {
  const auto bw = shape.bbox.w, bh = shape.bbox.h;
  if (donor.height < bh || donor.width < bw) {
    throw SizeError("donor " + std::to_string(donor.width) + "x" + std::to_string(donor.height) +
                    " is smaller than the defect box " + std::to_string(bw) + "x" + std::to_string(bh));
  }
  const std::size_t x0 = rng.below(donor.width - bw + 1);
  const std::size_t y0 = rng.below(donor.height - bh + 1);
  Image fill(bh, bw, donor.channels);
  for (std::size_t y = 0; y < bh; ++y) {
    for (std::size_t x = 0; x < bw; ++x) {
      for (std::size_t c = 0; c < donor.channels; ++c) fill.at(y, x, c) = donor.at(y0 + y, x0 + x, c);
    }
  }
  return fill;
}

Offset place_defect(const ShapeMask& shape, std::size_t height, std::size_t width, const BinaryMask* saliency,
                    Rng& rng, std::size_t retry_budget) {
  check_frame(height, width);
  const BinaryMask local = shape.crop();
  const std::size_t bw = local.width, bh = local.height;
  if (bw == 0 || bh == 0) throw PlacementError("cannot place an empty shape");

  BoundingBox region{0, 0, width, height};
  if (saliency) {
    if (saliency->height != height || saliency->width != width) {
      throw DimensionError("saliency mask is " + std::to_string(saliency->width) + "x" +
                           std::to_string(saliency->height) + ", target is " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
    region = saliency->bounds();
  }
  if (region.w < bw || region.h < bh) {
    throw PlacementError("defect box " + std::to_string(bw) + "x" + std::to_string(bh) +
                         " does not fit the saliency region " + std::to_string(region.w) + "x" +
                         std::to_string(region.h));
  }

  auto feasible = [&](std::size_t ox, std::size_t oy) {
    if (!saliency) return true;
    for (std::size_t y = 0; y < bh; ++y) {
      for (std::size_t x = 0; x < bw; ++x) {
        if (local.test(y, x) && !saliency->test(oy + y, ox + x)) return false;
      }
    }
    return true;
  };

  const std::size_t span_x = region.w - bw + 1, span_y = region.h - bh + 1;
  for (std::size_t attempt = 0; attempt < retry_budget; ++attempt) {
    const std::size_t ox = region.x + rng.below(span_x);
    const std::size_t oy = region.y + rng.below(span_y);
    if (feasible(ox, oy)) return {ox, oy};
  }
  std::vector<Offset> all;
  for (std::size_t oy = region.y; oy < region.y + span_y; ++oy) {
    for (std::size_t ox = region.x; ox < region.x + span_x; ++ox) {
      if (feasible(ox, oy)) all.push_back({ox, oy});
    }
  }
  if (all.empty()) throw PlacementError("no offset keeps the defect inside the saliency region");
  return all[rng.below(all.size())];
}

Image fuse_defect(const Image& image, const Image& fill, const BinaryMask& local_mask, Offset offset, FuseMode mode,
                  double beta) {
  if (fill.height != local_mask.height || fill.width != local_mask.width) {
    throw DimensionError("fill and mask dims differ");
  }
  if (fill.channels != image.channels) throw DimensionError("fill and image channel counts differ");
  if (offset.x + local_mask.width > image.width || offset.y + local_mask.height > image.height) {
    throw PlacementError("defect at (" + std::to_string(offset.x) + ", " + std::to_string(offset.y) +
                         ") extends past the image bounds");
  }
  if (mode == FuseMode::kBlend && !(beta > 0.0 && beta <= 1.0)) {
    throw ParameterError("blend weight must be in (0, 1], got " + std::to_string(beta));
  }

  Image out = image;
  for (std::size_t y = 0; y < local_mask.height; ++y) {
    for (std::size_t x = 0; x < local_mask.width; ++x) {
      if (!local_mask.test(y, x)) continue;
      for (std::size_t c = 0; c < image.channels; ++c) {
        auto& px = out.at(offset.y + y, offset.x + x, c);
        const std::uint8_t f = fill.at(y, x, c);
        if (mode == FuseMode::kPaste) {
          px = f;
        } else {
          const double v = beta * f + (1.0 - beta) * px;
          px = static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
        }
      }
    }
  }
  return out;
}

SynthSample make_defect_sample(const Image& image, const BinaryMask* saliency, const Image* donor,
                               const DefectConfig& cfg, ShapeKind shape_kind, FillKind fill_kind, Rng& rng) {
  cfg.validate();
  if (image.height == 0 || image.width == 0 || image.channels == 0) throw DimensionError("empty target image");

  std::optional<ShapeMask> shape;
  Offset offset;
  for (std::size_t attempt = 0; attempt < cfg.retry_budget && !shape; ++attempt) {
    auto candidate = gen_shape(shape_kind, image.height, image.width, cfg, rng);
    try {
      offset = place_defect(candidate, image.height, image.width, saliency, rng, cfg.retry_budget);
      shape = std::move(candidate);
    } catch (const PlacementError&) {
      if (attempt + 1 == cfg.retry_budget) throw;
    }
  }

  const Image& source = (donor && !cfg.self_donor) ? *donor : image;
  const Image fill = fill_kind == FillKind::kNoise ? gen_noise_fill(*shape, cfg, image.channels, rng)
                                                   : gen_cutpaste_fill(*shape, source, rng);
  const FuseMode mode = cfg.fuse_modes[rng.below(cfg.fuse_modes.size())];
  const double beta = mode == FuseMode::kBlend ? rng.uniform(cfg.blend_weight.lo, cfg.blend_weight.hi) : 1.0;

  const BinaryMask local = shape->crop();
  SynthSample sample;
  sample.image = fuse_defect(image, fill, local, offset, mode, beta);
  sample.mask = BinaryMask(image.height, image.width);
  for (std::size_t y = 0; y < local.height; ++y) {
    for (std::size_t x = 0; x < local.width; ++x) {
      if (local.test(y, x)) sample.mask.set(offset.y + y, offset.x + x);
    }
  }
  sample.label = defect_label(shape_kind, fill_kind);
  return sample;
}

SynthSample make_sample(const Image& image, const BinaryMask* saliency, const Image* donor, const DefectConfig& cfg,
                        Rng& rng) {
  cfg.validate();
  struct Option {
    bool normal;
    ShapeKind shape;
    FillKind fill;
  };
  std::vector<Option> options;
  if (cfg.include_normal) options.push_back({true, ShapeKind::kBezierBlob, FillKind::kNoise});
  for (auto s : cfg.shapes) {
    for (auto f : cfg.fills) options.push_back({false, s, f});
  }
  const Option pick = options[rng.below(options.size())];
  if (pick.normal) return {image, BinaryMask(image.height, image.width), 0};
  return make_defect_sample(image, saliency, donor, cfg, pick.shape, pick.fill, rng);
}

}  // namespace patchad
