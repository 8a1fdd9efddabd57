#pragma once

// Brute-force reference implementations. Deliberately naive: no shared code
// with the engine beyond the public data types, scalar loops only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "patchad/feature_bank.hpp"
#include "patchad/rng.hpp"

namespace oracle {

using Rows = std::vector<std::vector<float>>;

inline double dist(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

inline Rows random_rows(std::size_t n, std::size_t dim, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  patchad::Rng rng(seed);
  Rows rows(n, std::vector<float>(dim));
  for (auto& r : rows) {
    for (auto& v : r) v = static_cast<float>(rng.uniform(lo, hi));
  }
  return rows;
}

inline patchad::MemoryBank to_bank(const Rows& rows) {
  std::vector<float> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return patchad::MemoryBank(rows.front().size(), std::move(flat));
}

/// (distance, index) pairs for every row except `skip`, sorted.
inline std::vector<std::pair<double, std::size_t>> ranked(const std::vector<float>& q, const Rows& rows,
                                                          std::size_t skip = SIZE_MAX) {
  std::vector<std::pair<double, std::size_t>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i != skip) out.emplace_back(dist(q, rows[i]), i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::pair<std::size_t, double> nearest(const std::vector<float>& q, const Rows& rows) {
  std::size_t best = 0;
  double best_d = dist(q, rows[0]);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = dist(q, rows[i]);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return {best, best_d};
}

inline std::vector<double> densities(const Rows& rows, std::size_t k) {
  std::vector<double> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = ranked(rows[i], rows, i);
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += r[j].first;
    out.push_back(s / static_cast<double>(k));
  }
  return out;
}

inline double knn(const std::vector<float>& q, const Rows& rows, std::size_t k) {
  const auto r = ranked(q, rows);
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) s += r[j].first;
  return s / static_cast<double>(k);
}

inline double kthnn(const std::vector<float>& q, const Rows& rows, std::size_t k) { return ranked(q, rows)[k - 1].first; }

/// Breunig et al.: reach_k(p, o) = max(k-distance(o), d(p, o)),
/// lrd(p) = 1 / mean reach over p's k neighbors, LOF = mean lrd(o) / lrd(p).
inline double lof(const std::vector<float>& q, const Rows& rows, std::size_t k) {
  constexpr double eps = 1e-12;
  auto kdist = [&](std::size_t i) { return ranked(rows[i], rows, i)[k - 1].first; };
  auto lrd_of_bank = [&](std::size_t i) {
    const auto nb = ranked(rows[i], rows, i);
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += std::max(kdist(nb[j].second), nb[j].first);
    return 1.0 / std::max(s / static_cast<double>(k), eps);
  };
  const auto nb = ranked(q, rows);
  double reach = 0.0, lrd_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    reach += std::max(kdist(nb[j].second), nb[j].first);
    lrd_sum += lrd_of_bank(nb[j].second);
  }
  const double lrd_q = 1.0 / std::max(reach / static_cast<double>(k), eps);
  return (lrd_sum / static_cast<double>(k)) / lrd_q;
}

inline double ldof(const std::vector<float>& q, const Rows& rows, std::size_t k) {
  const auto nb = ranked(q, rows);
  double to_q = 0.0;
  for (std::size_t j = 0; j < k; ++j) to_q += nb[j].first;
  double pair_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      pair_sum += dist(rows[nb[a].second], rows[nb[b].second]);
      ++pairs;
    }
  }
  const double inner = pairs == 0 ? 0.0 : pair_sum / static_cast<double>(pairs);
  return (to_q / static_cast<double>(k)) / std::max(inner, 1e-12);
}

/// Counts every positive/negative pair: 1 if ordered, 0.5 if tied.
inline double auroc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
  double good = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      total += 1.0;
      if (scores[i] > scores[j]) good += 1.0;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / total;
}

inline double cover_radius(const Rows& rows, const std::vector<std::size_t>& centers) {
  double worst = 0.0;
  for (const auto& r : rows) {
    double best = INFINITY;
    for (auto c : centers) best = std::min(best, dist(r, rows[c]));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Optimal k-center radius by enumerating every k-subset.
inline double optimal_cover_radius(const Rows& rows, std::size_t k) {
  const std::size_t n = rows.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), true);
  double best = INFINITY;
  do {
    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) centers.push_back(i);
    }
    best = std::min(best, cover_radius(rows, centers));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// Half-pixel bilinear sample of an h x w plane at output pixel (oy, ox).
inline double bilinear_at(const std::vector<double>& src, std::size_t h, std::size_t w, std::size_t out_h,
                          std::size_t out_w, std::size_t oy, std::size_t ox) {
  auto coord = [](std::size_t o, std::size_t in, std::size_t out) {
    const double c = (static_cast<double>(o) + 0.5) * static_cast<double>(in) / static_cast<double>(out) - 0.5;
    return std::clamp(c, 0.0, static_cast<double>(in - 1));
  };
  const double sy = coord(oy, h, out_h), sx = coord(ox, w, out_w);
  const auto y0 = static_cast<std::size_t>(std::floor(sy)), x0 = static_cast<std::size_t>(std::floor(sx));
  const std::size_t y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
  const double fy = sy - static_cast<double>(y0), fx = sx - static_cast<double>(x0);
  const double top = src[y0 * w + x0] * (1 - fx) + src[y0 * w + x1] * fx;
  const double bottom = src[y1 * w + x0] * (1 - fx) + src[y1 * w + x1] * fx;
  return top * (1 - fy) + bottom * fy;
}

}  // namespace oracle
