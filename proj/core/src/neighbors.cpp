#include "patchad/neighbors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "patchad/errors.hpp"

namespace patchad {

namespace {

struct Candidate {
  double sq;
  std::size_t index;
};

bool closer(const Candidate& a, const Candidate& b) noexcept {
  return a.sq < b.sq || (a.sq == b.sq && a.index < b.index);
}

// Max-heap of the k best candidates seen so far (worst on top).
class BoundedHeap {
 public:
  explicit BoundedHeap(std::size_t k) : k_(k) { items_.reserve(k); }

  void offer(Candidate c) {
    if (items_.size() < k_) {
      items_.push_back(c);
      std::push_heap(items_.begin(), items_.end(), closer);
    } else if (closer(c, items_.front())) {
      std::pop_heap(items_.begin(), items_.end(), closer);
      items_.back() = c;
      std::push_heap(items_.begin(), items_.end(), closer);
    }
  }

  std::vector<Neighbor> sorted() const {
    auto items = items_;
    std::sort(items.begin(), items.end(), closer);
    std::vector<Neighbor> out;
    out.reserve(items.size());
    for (const auto& c : items) out.push_back({c.index, std::sqrt(c.sq)});
    return out;
  }

 private:
  std::size_t k_;
  std::vector<Candidate> items_;
};

void check_query(std::span<const float> query, const MemoryBank& bank) {
  if (query.size() != bank.dim()) {
    throw DimensionError("query has dim " + std::to_string(query.size()) + ", bank has dim " +
                         std::to_string(bank.dim()));
  }
}

}  // namespace

double squared_distance(std::span<const float> a, std::span<const float> b) noexcept {
  // four independent lanes let the compiler vectorize without reassociation
  std::array<double, 4> acc{};
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double d = static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]);
      acc[l] += d * d;
    }
  }
  for (; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc[0] += d * d;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

Neighbor nearest(std::span<const float> query, const MemoryBank& bank) {
  check_query(query, bank);
  Candidate best{squared_distance(query, bank.row(0)), 0};
  for (std::size_t i = 1; i < bank.size(); ++i) {
    const double sq = squared_distance(query, bank.row(i));
    if (sq < best.sq) best = {sq, i};
  }
  return {best.index, std::sqrt(best.sq)};
}

std::vector<Neighbor> k_nearest(std::span<const float> query, const MemoryBank& bank, std::size_t k,
                                std::optional<std::size_t> exclude) {
  check_query(query, bank);
  const std::size_t available = bank.size() - ((exclude && *exclude < bank.size()) ? 1 : 0);
  if (k == 0 || k > available) {
    throw ParameterError("k = " + std::to_string(k) + " must be in 1.." + std::to_string(available));
  }
  BoundedHeap heap(k);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (exclude && *exclude == i) continue;
    heap.offer({squared_distance(query, bank.row(i)), i});
  }
  return heap.sorted();
}

std::vector<std::vector<Neighbor>> all_k_nearest(const MemoryBank& bank, std::size_t k) {
  const std::size_t n = bank.size();
  if (k == 0 || k >= n) {
    throw ParameterError("k = " + std::to_string(k) + " must be in 1.." + std::to_string(n - 1) +
                         " for a bank of " + std::to_string(n) + " entries");
  }
  std::vector<BoundedHeap> heaps(n, BoundedHeap(k));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = bank.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sq = squared_distance(ri, bank.row(j));
      heaps[i].offer({sq, j});
      heaps[j].offer({sq, i});
    }
  }
  std::vector<std::vector<Neighbor>> out;
  out.reserve(n);
  for (const auto& h : heaps) out.push_back(h.sorted());
  return out;
}

}  // namespace patchad
