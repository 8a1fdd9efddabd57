#include "patchad/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "patchad/errors.hpp"
#include "patchad/neighbors.hpp"

namespace patchad {

std::size_t coreset_target_size(std::size_t n, double proportion) {
  if (!(proportion > 0.0 && proportion <= 1.0)) {
    throw ParameterError("coreset proportion must be in (0, 1], got " + std::to_string(proportion));
  }
  const auto target = static_cast<std::size_t>(std::llround(proportion * static_cast<double>(n)));
  return std::clamp<std::size_t>(target, 1, n);
}

CoresetSelection greedy_kcenter(const MemoryBank& bank, double proportion, std::size_t seed_index) {
  auto sel = greedy_kcenter_count(bank, coreset_target_size(bank.size(), proportion), seed_index);
  sel.proportion = proportion;
  return sel;
}

CoresetSelection greedy_kcenter_count(const MemoryBank& bank, std::size_t target, std::size_t seed_index) {
  const std::size_t n = bank.size();
  if (seed_index >= n) {
    throw ParameterError("seed index " + std::to_string(seed_index) + " out of range for " + std::to_string(n) +
                         " entries");
  }
  if (target == 0 || target > n) {
    throw ParameterError("coreset target " + std::to_string(target) + " must be in 1.." + std::to_string(n));
  }

  std::vector<char> chosen(n, 0);
  std::vector<std::size_t> picked{seed_index};
  chosen[seed_index] = 1;

  // squared distance from each entry to the selected set
  std::vector<double> gap(n);
  const auto seed_row = bank.row(seed_index);
  for (std::size_t i = 0; i < n; ++i) gap[i] = squared_distance(bank.row(i), seed_row);

  while (picked.size() < target) {
    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i] && gap[i] > best_gap) {
        best_gap = gap[i];
        best = i;
      }
    }
    chosen[best] = 1;
    picked.push_back(best);
    const auto row = bank.row(best);
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i]) gap[i] = std::min(gap[i], squared_distance(bank.row(i), row));
    }
  }

  std::sort(picked.begin(), picked.end());
  return {std::move(picked), static_cast<double>(target) / static_cast<double>(n), seed_index};
}

MemoryBank select_entries(const MemoryBank& bank, const CoresetSelection& selection) {
  std::vector<float> rows;
  rows.reserve(selection.indices.size() * bank.dim());
  for (auto i : selection.indices) {
    if (i >= bank.size()) throw ParameterError("selection index " + std::to_string(i) + " out of range");
    const auto r = bank.row(i);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return MemoryBank(bank.dim(), std::move(rows));
}

double cover_radius(const MemoryBank& bank, std::span<const std::size_t> centers) {
  if (centers.empty()) throw EmptinessError("cover radius needs at least one center");
  double worst = 0.0;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto c : centers) best = std::min(best, squared_distance(bank.row(i), bank.row(c)));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

void save_index_list(const CoresetSelection& selection, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  for (auto i : selection.indices) out << i << '\n';
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace patchad
