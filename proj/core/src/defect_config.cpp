#include "patchad/defect_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "patchad/errors.hpp"

namespace patchad {

std::string_view to_string(ShapeKind k) noexcept {
  switch (k) {
    case ShapeKind::kBezierBlob: return "blob";
    case ShapeKind::kBezierScar: return "scar";
    case ShapeKind::kBezierClump: return "clump";
    case ShapeKind::kRect: return "rect";
    case ShapeKind::kRectScar: return "rectscar";
  }
  return "unknown";
}

std::string_view to_string(FillKind k) noexcept { return k == FillKind::kNoise ? "noise" : "cutpaste"; }

std::string_view to_string(FuseMode m) noexcept { return m == FuseMode::kPaste ? "paste" : "blend"; }

namespace {

void check_interval(const Interval& r, double min, double max, const char* name) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi)) || r.lo > r.hi || r.lo < min || r.hi > max) {
    throw ParameterError(std::string(name) + " range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                         "] must be non-empty and within [" + std::to_string(min) + ", " + std::to_string(max) + "]");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    auto item = trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    std::transform(item.begin(), item.end(), item.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParameterError("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::size_t parse_count(const std::string& v, const std::string& key) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParameterError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("config key '" + key + "': '" + v + "' is not a boolean");
}

template <typename E>
std::vector<E> parse_kinds(const std::string& v, const std::string& key, const std::map<std::string, E>& names) {
  std::vector<E> out;
  for (const auto& item : split_list(v)) {
    const auto it = names.find(item);
    if (it == names.end()) throw ParameterError("config key '" + key + "': unknown value '" + item + "'");
    if (std::find(out.begin(), out.end(), it->second) == out.end()) out.push_back(it->second);
  }
  return out;
}

template <typename E>
std::string join_kinds(const std::vector<E>& kinds) {
  std::string s;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) s += ", ";
    s += to_string(kinds[i]);
  }
  return s;
}

}  // namespace

void DefectConfig::validate() const {
  if (shapes.empty() && fills.empty() && !include_normal) throw ParameterError("config enables no sample classes");
  if (!shapes.empty() && fills.empty()) throw ParameterError("shapes are enabled but no fill kind is");
  if (!shapes.empty() && fuse_modes.empty()) throw ParameterError("shapes are enabled but no fuse mode is");
  check_interval(area, 0.0, 1.0, "area");
  if (area.hi <= 0.0) throw ParameterError("area range must allow a positive area");
  check_interval(scar_aspect, 1.0, 1e6, "scar_aspect");
  check_interval(rect_aspect, 1.0, 1e6, "rect_aspect");
  check_interval(scar_radius, 0.0, 1e3, "scar_radius");
  check_interval(clump_radius, 1.0, 1e3, "clump_radius");
  check_interval(noise_mean, 0.0, 255.0, "noise_mean");
  check_interval(noise_fluctuation, 0.0, 255.0, "noise_fluctuation");
  check_interval(blend_weight, 0.0, 1.0, "blend_weight");
  if (blend_weight.lo <= 0.0) throw ParameterError("blend weight must be > 0");
  if (control_points_min < 2 || control_points_min > control_points_max) {
    throw ParameterError("control point count range must satisfy 2 <= min <= max");
  }
  if (curve_samples < 2) throw ParameterError("curve_samples must be >= 2");
  if (retry_budget == 0) throw ParameterError("retry_budget must be positive");
}

DefectConfig parse_defect_config(std::istream& in) {
  DefectConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto lo = [](Interval& r) -> Setter { return [&r](const std::string& v, const std::string& k) { r.lo = parse_double(v, k); }; };
  auto hi = [](Interval& r) -> Setter { return [&r](const std::string& v, const std::string& k) { r.hi = parse_double(v, k); }; };
  auto count = [](std::size_t& c) -> Setter { return [&c](const std::string& v, const std::string& k) { c = parse_count(v, k); }; };
  auto flag = [](bool& b) -> Setter { return [&b](const std::string& v, const std::string& k) { b = parse_bool(v, k); }; };

  const std::map<std::string, Setter> setters{
      {"shapes",
       [&](const std::string& v, const std::string& k) {
         cfg.shapes = parse_kinds<ShapeKind>(v, k,
                                             {{"blob", ShapeKind::kBezierBlob},
                                              {"scar", ShapeKind::kBezierScar},
                                              {"clump", ShapeKind::kBezierClump},
                                              {"rect", ShapeKind::kRect},
                                              {"rectscar", ShapeKind::kRectScar}});
       }},
      {"fills",
       [&](const std::string& v, const std::string& k) {
         cfg.fills = parse_kinds<FillKind>(v, k, {{"noise", FillKind::kNoise}, {"cutpaste", FillKind::kCutPaste}});
       }},
      {"fuse",
       [&](const std::string& v, const std::string& k) {
         cfg.fuse_modes = parse_kinds<FuseMode>(v, k, {{"paste", FuseMode::kPaste}, {"blend", FuseMode::kBlend}});
       }},
      {"include_normal", flag(cfg.include_normal)},
      {"area_min", lo(cfg.area)},
      {"area_max", hi(cfg.area)},
      {"scar_aspect_min", lo(cfg.scar_aspect)},
      {"scar_aspect_max", hi(cfg.scar_aspect)},
      {"rect_aspect_min", lo(cfg.rect_aspect)},
      {"rect_aspect_max", hi(cfg.rect_aspect)},
      {"scar_radius_min", lo(cfg.scar_radius)},
      {"scar_radius_max", hi(cfg.scar_radius)},
      {"clump_radius_min", lo(cfg.clump_radius)},
      {"clump_radius_max", hi(cfg.clump_radius)},
      {"noise_mean_min", lo(cfg.noise_mean)},
      {"noise_mean_max", hi(cfg.noise_mean)},
      {"noise_fluctuation_min", lo(cfg.noise_fluctuation)},
      {"noise_fluctuation_max", hi(cfg.noise_fluctuation)},
      {"blend_min", lo(cfg.blend_weight)},
      {"blend_max", hi(cfg.blend_weight)},
      {"control_points_min", count(cfg.control_points_min)},
      {"control_points_max", count(cfg.control_points_max)},
      {"curve_samples", count(cfg.curve_samples)},
      {"retry_budget", count(cfg.retry_budget)},
      {"self_donor", flag(cfg.self_donor)},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParameterError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(value, key);
  }
  cfg.validate();
  return cfg;
}

DefectConfig load_defect_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open defect config");
  try {
    return parse_defect_config(in);
  } catch (const ParameterError& e) {
    throw ParameterError(path.string() + ": " + e.what());
  }
}

void write_defect_config(const DefectConfig& cfg, std::ostream& out) {
  out << "shapes = " << join_kinds(cfg.shapes) << '\n'
      << "fills = " << join_kinds(cfg.fills) << '\n'
      << "fuse = " << join_kinds(cfg.fuse_modes) << '\n'
      << "include_normal = " << (cfg.include_normal ? "true" : "false") << '\n';
  auto shortest = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  };
  auto range = [&](const char* name, const Interval& r) {
    out << name << "_min = " << shortest(r.lo) << '\n' << name << "_max = " << shortest(r.hi) << '\n';
  };
  range("area", cfg.area);
  range("scar_aspect", cfg.scar_aspect);
  range("rect_aspect", cfg.rect_aspect);
  range("scar_radius", cfg.scar_radius);
  range("clump_radius", cfg.clump_radius);
  range("noise_mean", cfg.noise_mean);
  range("noise_fluctuation", cfg.noise_fluctuation);
  range("blend", cfg.blend_weight);
  out << "control_points_min = " << cfg.control_points_min << '\n'
      << "control_points_max = " << cfg.control_points_max << '\n'
      << "curve_samples = " << cfg.curve_samples << '\n'
      << "retry_budget = " << cfg.retry_budget << '\n'
      << "self_donor = " << (cfg.self_donor ? "true" : "false") << '\n';
}

}  // namespace patchad
