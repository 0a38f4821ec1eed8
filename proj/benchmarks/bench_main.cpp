#include <benchmark/benchmark.h>

#include <vector>

#include "rydsub/absorber_model.hpp"
#include "rydsub/coherence_kernel.hpp"
#include "rydsub/oracles.hpp"
#include "rydsub/subtraction_model.hpp"

namespace {

using namespace rydsub;

void BM_Phi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x, y;
  for (std::size_t k = 0; k < n; ++k) {
    x.push_back(3.0 + 4.0 * static_cast<double>(k));
    y.push_back(4.5 + 4.0 * static_cast<double>(k));
  }
  ModelParams params;
  params.d_b = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(phi(std::span<const double>(x), std::span<const double>(y), params));
}
BENCHMARK(BM_Phi)->DenseRange(1, 4);

void BM_OptimizeFidelity(benchmark::State& state) {
  const double p = scattering_probability(static_cast<double>(state.range(0)) / 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_fidelity({2.0, 1.0, 1.0, 1.0}, p));
}
BENCHMARK(BM_OptimizeFidelity)->Arg(1)->Arg(4)->Arg(20);

void BM_OptimizeAbsorber(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimize_absorber(2.0, 1.0));
}
BENCHMARK(BM_OptimizeAbsorber)->Unit(benchmark::kMillisecond);

void BM_McPipeline(benchmark::State& state) {
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_pipeline(3, SourceSampling::poisson(1.5), 0.9, 0.8, 0.6, trials, 1, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_McPipeline)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
