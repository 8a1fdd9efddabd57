#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "patchad/errors.hpp"
#include "patchad/feature_bank.hpp"
#include "patchad/interpolate.hpp"
#include "patchad/neighbors.hpp"

using namespace patchad;

namespace {

MemoryBank bank_1d(std::initializer_list<float> xs) { return MemoryBank(1, std::vector<float>(xs)); }

}  // namespace

TEST_CASE("bilinear resize matches the scalar oracle") {
  const std::vector<double> src{0, 1, 1, 0};
  const auto out = bilinear_resize(src, 2, 2, 4, 4);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) CHECK(out[y * 4 + x] == doctest::Approx(oracle::bilinear_at(src, 2, 2, 4, 4, y, x)).epsilon(1e-12));
  }
  // half-pixel sampling: source coordinates 0, .25, .75, 1 per axis
  CHECK(out[0] == 0.0);
  CHECK(out[1 * 4 + 1] == doctest::Approx(0.375));
  CHECK(out[1 * 4 + 2] == doctest::Approx(0.625));
}

TEST_CASE("resampling preserves constants") {
  const std::vector<double> src(5 * 7, 2.5);
  for (double v : bilinear_resize(src, 5, 7, 11, 13)) CHECK(v == doctest::Approx(2.5));
  for (double v : box_mean(src, 5, 7, 3)) CHECK(v == doctest::Approx(2.5));
  for (double v : gaussian_blur(src, 5, 7, 1.3)) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("box mean with edge replication") {
  const std::vector<double> src{1, 2, 3};
  const auto out = box_mean(src, 1, 3, 3);
  CHECK(out[0] == doctest::Approx((1 + 1 + 2) / 3.0));
  CHECK(out[1] == doctest::Approx(2.0));
  CHECK(out[2] == doctest::Approx((2 + 3 + 3) / 3.0));
  CHECK_THROWS(box_mean(src, 1, 3, 2));
}

TEST_CASE("aggregate_hierarchies") {
  SUBCASE("hand example with window 1") {
    const FeatureTensor phi2(1, 2, 2, {1, 2, 3, 4});
    const FeatureTensor phi3(1, 1, 1, {5});
    const auto set = aggregate_hierarchies(phi2, phi3, 1);
    CHECK(set.grid_height == 2);
    CHECK(set.grid_width == 2);
    CHECK(set.dim == 2);
    CHECK(set.vectors == std::vector<float>{1, 5, 2, 5, 3, 5, 4, 5});
  }
  SUBCASE("dims follow phi2 and C2 + C3") {
    const auto set = aggregate_hierarchies(FeatureTensor(128, 32, 32, 0.5f), FeatureTensor(256, 16, 16, 0.5f));
    CHECK(set.grid_height == 32);
    CHECK(set.grid_width == 32);
    CHECK(set.dim == 384);
    for (float v : set.vectors) CHECK(v == doctest::Approx(0.5f));
  }
  SUBCASE("phi3 larger than phi2") {
    CHECK_THROWS_AS(aggregate_hierarchies(FeatureTensor(1, 2, 2), FeatureTensor(1, 3, 2)), DimensionError);
  }
  SUBCASE("pooled values match a scalar loop") {
    FeatureTensor phi2(2, 3, 4);
    for (std::size_t i = 0; i < phi2.data.size(); ++i) phi2.data[i] = static_cast<float>((i * 7) % 5);
    const FeatureTensor phi3(1, 3, 4, 1.0f);
    const auto set = aggregate_hierarchies(phi2, phi3, 3);
    for (std::size_t c = 0; c < 2; ++c) {
      for (long h = 0; h < 3; ++h) {
        for (long w = 0; w < 4; ++w) {
          double s = 0.0;
          for (long dh = -1; dh <= 1; ++dh) {
            for (long dw = -1; dw <= 1; ++dw) {
              const auto hh = static_cast<std::size_t>(std::clamp(h + dh, 0L, 2L));
              const auto ww = static_cast<std::size_t>(std::clamp(w + dw, 0L, 3L));
              s += phi2.at(c, hh, ww);
            }
          }
          const auto row = static_cast<std::size_t>(h * 4 + w);
          CHECK(set.row(row)[c] == doctest::Approx(s / 9.0).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("build_memory_bank concatenates image-major") {
  PatchFeatureSet a{1, 2, 2, {1, 2, 3, 4}};
  PatchFeatureSet b{2, 1, 2, {5, 6, 7, 8}};
  const std::vector<PatchFeatureSet> sets{a, b};
  const auto bank = build_memory_bank(sets);
  CHECK(bank.size() == 4);
  CHECK(bank.row(0)[0] == 1.0f);
  CHECK(bank.row(2)[0] == 5.0f);
  CHECK(bank.row(3)[1] == 8.0f);

  PatchFeatureSet c{1, 1, 3, {1, 2, 3}};
  const std::vector<PatchFeatureSet> mixed{a, c};
  CHECK_THROWS_AS(build_memory_bank(mixed), DimensionError);
  CHECK_THROWS_AS(build_memory_bank(std::span<const PatchFeatureSet>{}), EmptinessError);
}

TEST_CASE("build_memory_bank row count over many sets") {
  Rng rng(11);
  std::vector<PatchFeatureSet> sets;
  std::size_t expected = 0;
  for (int i = 0; i < 100; ++i) {
    PatchFeatureSet s;
    s.grid_height = 1 + rng.below(4);
    s.grid_width = 1 + rng.below(4);
    s.dim = 16;
    s.vectors.resize(s.rows() * 16);
    for (auto& v : s.vectors) v = static_cast<float>(rng.uniform());
    expected += s.rows();
    sets.push_back(std::move(s));
  }
  CHECK(build_memory_bank(sets).size() == expected);
}

TEST_CASE("learn_local_density") {
  SUBCASE("1-D hand example") {
    const auto ld = learn_local_density(bank_1d({0, 1, 3}), 2);
    CHECK(ld.density(0) == doctest::Approx(2.0));
    CHECK(ld.density(1) == doctest::Approx(1.5));
    CHECK(ld.density(2) == doctest::Approx(2.5));
    CHECK(ld.k_used() == 2);
  }
  SUBCASE("identical points have zero density") {
    const auto ld = learn_local_density(MemoryBank(2, std::vector<float>(10, 0.25f)), 3);
    for (float d : ld.densities()) CHECK(d == 0.0f);
    const auto pair = learn_local_density(bank_1d({4, 4}), 1);
    CHECK(pair.density(0) == 0.0f);
    CHECK(pair.density(1) == 0.0f);
  }
  SUBCASE("K bounds") {
    CHECK_THROWS_AS(learn_local_density(bank_1d({0, 1, 3}), 3), ParameterError);
    CHECK_THROWS_AS(learn_local_density(bank_1d({0, 1, 3}), 0), ParameterError);
  }
  SUBCASE("matches the all-pairs oracle") {
    const auto rows = oracle::random_rows(60, 5, 3);
    for (std::size_t k : {1u, 4u, 59u}) {
      const auto ld = learn_local_density(oracle::to_bank(rows), k);
      const auto ref = oracle::densities(rows, k);
      for (std::size_t i = 0; i < rows.size(); ++i) CHECK(ld.density(i) == doctest::Approx(ref[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("bank file roundtrip") {
  const auto ld = learn_local_density(bank_1d({0, 1, 3}), 2);
  std::stringstream io(std::ios::in | std::ios::out | std::ios::binary);
  write_bank(ld, io);
  const auto back = read_bank(io);
  CHECK(back.k_used() == 2);
  CHECK(std::vector<float>(back.densities().begin(), back.densities().end()) ==
        std::vector<float>(ld.densities().begin(), ld.densities().end()));

  SUBCASE("plain bank has no densities") {
    std::stringstream plain(std::ios::in | std::ios::out | std::ios::binary);
    write_memory_bank(ld.bank(), plain);
    CHECK_THROWS_AS(read_bank(plain), ConsistencyError);
  }
  SUBCASE("density length mismatch") {
    std::stringstream bad(std::ios::in | std::ios::out | std::ios::binary);
    write_memory_bank(ld.bank(), bad);
    write_raw_tensor(RawTensor{{2}, {1, 1}}, bad);
    const char trailer[4] = {1, 0, 0, 0};
    bad.write(trailer, 4);
    CHECK_THROWS_AS(read_bank(bad), ConsistencyError);
  }
  SUBCASE("LocalDensityBank invariants") {
    CHECK_THROWS_AS(LocalDensityBank(bank_1d({0, 1}), {0.5f}, 1), ConsistencyError);
    CHECK_THROWS_AS(LocalDensityBank(bank_1d({0, 1}), {0.5f, -1.0f}, 1), DataError);
    CHECK_THROWS_AS(LocalDensityBank(bank_1d({0, 1}), {0.5f, 1.0f}, 2), ConsistencyError);
  }
}

TEST_CASE("large bank roundtrip is bit-identical") {
  const std::size_t n = 10000, d = 384;
  Rng rng(5);
  std::vector<float> flat(n * d);
  for (auto& v : flat) v = static_cast<float>(rng.uniform(-3, 3));
  std::vector<float> dens(n);
  for (auto& v : dens) v = static_cast<float>(rng.uniform());
  const LocalDensityBank ld(MemoryBank(d, flat), dens, 9);
  std::stringstream io(std::ios::in | std::ios::out | std::ios::binary);
  write_bank(ld, io);
  const std::string first = io.str();
  const auto back = read_bank(io);
  std::stringstream again(std::ios::in | std::ios::out | std::ios::binary);
  write_bank(back, again);
  CHECK(again.str() == first);
  CHECK(std::equal(flat.begin(), flat.end(), back.bank().data().begin()));
}

TEST_CASE("neighbors") {
  const auto bank = bank_1d({0, 10});
  const float q = 4.0f;
  const auto nn = nearest(std::span<const float>(&q, 1), bank);
  CHECK(nn.index == 0);
  CHECK(nn.distance == 4.0);

  SUBCASE("ties go to the lower index") {
    const auto tie = bank_1d({3, 1, 3, 1});
    const float f = 2.0f;
    CHECK(nearest(std::span<const float>(&f, 1), tie).index == 0);
    const auto ks = k_nearest(std::span<const float>(&f, 1), tie, 4);
    CHECK(ks[0].index == 0);
    CHECK(ks[1].index == 1);
    CHECK(ks[2].index == 2);
    CHECK(ks[3].index == 3);
  }
  SUBCASE("dimension mismatch") {
    const std::vector<float> two{1, 2};
    CHECK_THROWS_AS(nearest(two, bank), DimensionError);
  }
  SUBCASE("all_k_nearest agrees with k_nearest with exclusion") {
    const auto rows = oracle::random_rows(40, 3, 8);
    const auto b = oracle::to_bank(rows);
    const auto all = all_k_nearest(b, 5);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(all[i] == k_nearest(b.row(i), b, 5, i));
  }
}
