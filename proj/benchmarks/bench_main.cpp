#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lanecurate/coreset.hpp"
#include "lanecurate/eigenlane.hpp"
#include "lanecurate/mask_similarity.hpp"
#include "lanecurate/pipeline.hpp"
#include "lanecurate/ssim.hpp"

using namespace lanecurate;

namespace {

GrayImage noise_image(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage img(w, h);
  for (double& v : img.pixels) v = u(rng);
  return img;
}

SampledLane random_lane(std::mt19937_64& rng, std::size_t p) {
  std::uniform_real_distribution<double> u(0.0, 768.0);
  SampledLane l;
  for (std::size_t i = 0; i < p; ++i) {
    l.xs.push_back(u(rng));
    l.valid.push_back(true);
  }
  return l;
}

std::vector<LaneMask> random_masks(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::vector<LaneMask> masks(n);
  for (auto& m : masks) {
    const std::size_t lanes = 1 + rng() % 4;
    for (std::size_t l = 0; l < lanes; ++l) m.lanes.push_back(random_lane(rng, p));
  }
  return masks;
}

void BM_Ssim(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = noise_image(rng, 768, 256);
  const auto b = noise_image(rng, 768, 256);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_MsSsim(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto a = noise_image(rng, 768, 256);
  const auto b = noise_image(rng, 768, 256);
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(BM_MsSsim)->Unit(benchmark::kMillisecond);

void BM_MsSsimPrepared(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto a = prepare_ms_ssim(noise_image(rng, 768, 256));
  const auto b = prepare_ms_ssim(noise_image(rng, 768, 256));
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(BM_MsSsimPrepared)->Unit(benchmark::kMillisecond);

void BM_FitBasis(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto lanes = static_cast<std::size_t>(state.range(0));
  LanePool pool(50);
  for (std::size_t i = 0; i < lanes; ++i) pool.add(random_lane(rng, 50).xs);
  for (auto _ : state) benchmark::DoNotOptimize(fit_basis(pool));
}
BENCHMARK(BM_FitBasis)->Arg(100)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(SimilarityGraph::condensed_size(n));
  for (double& x : w) x = u(rng);
  const SimilarityGraph g(n, std::move(w));
  const auto policy = static_cast<SelectionPolicy>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_select(g, 20, policy));
}
BENCHMARK(BM_Greedy)->Args({200, 0})->Args({2000, 0})->Args({200, 1})->Args({2000, 1});

void BM_MaskGraph(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto masks = random_masks(rng, 200, 50);
  LanePool pool(50);
  for (const auto& m : masks) pool.add_mask(m);
  const auto basis = fit_basis(pool, 8);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mask_dissimilarity_graph(masks, basis, 100.0, {}, threads));
  }
}
BENCHMARK(BM_MaskGraph)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
