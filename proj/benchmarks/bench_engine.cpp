// Engine microbenchmarks over random banks. Feature extraction is not part
// of any timed path.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "patchad/coreset.hpp"
#include "patchad/feature_bank.hpp"
#include "patchad/neighbors.hpp"
#include "patchad/rng.hpp"
#include "patchad/scoring.hpp"

namespace {

std::vector<float> random_values(std::size_t count, std::uint64_t seed) {
  patchad::Rng rng(seed);
  std::vector<float> v(count);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-1, 1));
  return v;
}

patchad::MemoryBank random_bank(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return patchad::MemoryBank(dim, random_values(n * dim, seed));
}

void BM_NearestNeighbor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto bank = random_bank(n, dim, 1);
  const auto query = random_values(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(patchad::nearest(query, bank));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_NearestNeighbor)->Args({1000, 64})->Args({10000, 384})->Args({50000, 384});

void BM_LearnDensity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bank = random_bank(n, 384, 3);
  for (auto _ : state) benchmark::DoNotOptimize(patchad::learn_local_density(bank, 9));
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LearnDensity)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_GreedyKCenter(benchmark::State& state) {
  const auto bank = random_bank(static_cast<std::size_t>(state.range(0)), 384, 4);
  const double proportion = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(patchad::greedy_kcenter(bank, proportion));
}
BENCHMARK(BM_GreedyKCenter)->Args({10000, 1})->Args({10000, 10})->Unit(benchmark::kMillisecond);

void BM_ScoreImage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ld = patchad::learn_local_density(random_bank(n, 384, 5), 9);
  const patchad::Scorer scorer(ld, patchad::ScorerConfig{});
  const patchad::PatchFeatureSet grid{8, 8, 384, random_values(64 * 384, 6)};
  for (auto _ : state) benchmark::DoNotOptimize(scorer.score_image(grid));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ScoreImage)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
