// Randomized invariants, each checked over several seeded instances.

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "patchad/coreset.hpp"
#include "patchad/eval.hpp"
#include "patchad/scoring.hpp"

using namespace patchad;

namespace {

// Random rotation (product of Givens rotations) plus a translation.
struct RigidMotion {
  std::size_t dim;
  std::vector<double> rot;  // dim x dim, row-major
  std::vector<double> shift;

  RigidMotion(std::size_t d, Rng& rng) : dim(d), rot(d * d, 0.0), shift(d) {
    for (std::size_t i = 0; i < d; ++i) rot[i * d + i] = 1.0;
    for (std::size_t n = 0; n < 3 * d; ++n) {
      const auto a = static_cast<std::size_t>(rng.below(d));
      auto b = static_cast<std::size_t>(rng.below(d));
      if (a == b) b = (a + 1) % d;
      const double t = rng.uniform(0, 6.283185307179586);
      const double c = std::cos(t), s = std::sin(t);
      for (std::size_t col = 0; col < d; ++col) {
        const double ra = rot[a * d + col], rb = rot[b * d + col];
        rot[a * d + col] = c * ra - s * rb;
        rot[b * d + col] = s * ra + c * rb;
      }
    }
    for (auto& v : shift) v = rng.uniform(-5, 5);
  }

  std::vector<float> apply(const std::vector<float>& x) const {
    std::vector<float> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double s = shift[i];
      for (std::size_t j = 0; j < dim; ++j) s += rot[i * dim + j] * x[j];
      out[i] = static_cast<float>(s);
    }
    return out;
  }

  oracle::Rows apply(const oracle::Rows& rows) const {
    oracle::Rows out;
    for (const auto& r : rows) out.push_back(apply(r));
    return out;
  }
};

}  // namespace

TEST_CASE("densities are invariant under rigid motions") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const auto rows = oracle::random_rows(50, 6, 1000 + seed);
    const RigidMotion motion(6, rng);
    const auto a = learn_local_density(oracle::to_bank(rows), 5);
    const auto b = learn_local_density(oracle::to_bank(motion.apply(rows)), 5);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(b.density(i) == doctest::Approx(a.density(i)).epsilon(1e-5));
  }
}

TEST_CASE("all scorers are invariant under rigid motions") {
  Rng rng(3);
  const auto rows = oracle::random_rows(40, 5, 31);
  const auto queries = oracle::random_rows(8, 5, 32);
  const RigidMotion motion(5, rng);
  const auto moved = motion.apply(rows);
  const auto ld_a = learn_local_density(oracle::to_bank(rows), 4);
  const auto ld_b = learn_local_density(oracle::to_bank(moved), 4);
  for (auto m : {ScoringMethod::kLdknn, ScoringMethod::kKnn, ScoringMethod::kKthNn, ScoringMethod::kLof,
                 ScoringMethod::kLdof}) {
    CAPTURE(to_string(m));
    const ScorerConfig cfg{m, 4, 0.7};
    const Scorer a(ld_a, cfg), b(ld_b, cfg);
    for (const auto& q : queries) {
      const double sa = a.score_patch(q), sb = b.score_patch(motion.apply(q));
      CHECK(sb == doctest::Approx(sa).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("densities are permutation-equivariant") {
  const auto rows = oracle::random_rows(45, 4, 55);
  std::vector<std::size_t> perm(rows.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(56);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  oracle::Rows shuffled;
  for (auto p : perm) shuffled.push_back(rows[p]);
  const auto a = learn_local_density(oracle::to_bank(rows), 6);
  const auto b = learn_local_density(oracle::to_bank(shuffled), 6);
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(b.density(i) == doctest::Approx(a.density(perm[i])).epsilon(1e-6));
}

TEST_CASE("densities grow with K") {
  const auto bank = oracle::to_bank(oracle::random_rows(60, 3, 60));
  std::vector<float> previous(60, 0.0f);
  for (std::size_t k = 1; k < 60; k += 7) {
    const auto ld = learn_local_density(bank, k);
    for (std::size_t i = 0; i < 60; ++i) {
      CHECK(ld.density(i) >= previous[i]);
      previous[i] = ld.density(i);
    }
  }
}

TEST_CASE("LDKNN score is monotone in alpha") {
  const auto ld = learn_local_density(oracle::to_bank(oracle::random_rows(30, 4, 70)), 3);
  for (const auto& q : oracle::random_rows(20, 4, 71)) {
    const auto m = nearest_neighbor(q, ld);
    double last = INFINITY;
    for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      const double s = ldknn_score_patch(q, ld, alpha);
      if (m.density > 0) CHECK(s < last);
      last = s;
    }
  }
}

TEST_CASE("knn mean never exceeds the kth distance") {
  const auto rows = oracle::random_rows(50, 8, 80);
  const auto bank = oracle::to_bank(rows);
  for (const auto& q : oracle::random_rows(50, 8, 81)) {
    for (std::size_t k = 1; k <= 50; k += 7) CHECK(knn_score(q, bank, k) <= kthnn_score(q, bank, k));
  }
}

TEST_CASE("coreset selection is deterministic") {
  const auto bank = oracle::to_bank(oracle::random_rows(120, 5, 90));
  CHECK(greedy_kcenter(bank, 0.2, 3).indices == greedy_kcenter(bank, 0.2, 3).indices);
}

TEST_CASE("AUROC invariances") {
  Rng rng(100);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LabeledScore> s(30);
    for (auto& x : s) x = {rng.uniform(-3, 3), static_cast<int>(rng.below(2))};
    s[0].label = 0;
    s[1].label = 1;
    const double base = auroc(s);
    auto transformed = s;
    for (auto& x : transformed) x.score = std::exp(2.0 * x.score) + 7.0;
    CHECK(auroc(transformed) == base);
    auto flipped = s;
    for (auto& x : flipped) x.label = 1 - x.label;
    CHECK(auroc(flipped) == doctest::Approx(1.0 - base).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_dataset is order-invariant") {
  Rng rng(110);
  std::vector<AnomalyResult> results;
  std::vector<GroundTruth> truth;
  for (int i = 0; i < 12; ++i) {
    AnomalyResult r;
    r.image_score = rng.uniform();
    PixelMap map{3, 3, std::vector<double>(9)};
    for (auto& v : map.values) v = rng.uniform();
    r.pixel_map = map;
    results.push_back(r);
    BinaryMask m(3, 3);
    const int label = i % 2;
    if (label) m.set(rng.below(3), rng.below(3));
    truth.push_back({label, m});
  }
  const auto a = evaluate_dataset(results, truth, true);
  std::reverse(results.begin(), results.end());
  std::reverse(truth.begin(), truth.end());
  const auto b = evaluate_dataset(results, truth, true);
  CHECK(a.image_auroc == b.image_auroc);
  CHECK(*a.pixel_auroc == *b.pixel_auroc);
}
