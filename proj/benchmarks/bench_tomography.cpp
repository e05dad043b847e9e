#include <benchmark/benchmark.h>

#include "qdswap/tomo/tomography.hpp"

namespace {

using namespace qdswap;

CountTable sample_table(double flux) {
  const DensityMatrix2Q rho = DensityMatrix2Q::from_pure(bell_state(BellLabel::PsiMinus));
  return simulate_counts(rho, full_setting_set(), flux, 11);
}

void BM_SimulateCounts(benchmark::State& state) {
  const DensityMatrix2Q rho = DensityMatrix2Q::maximally_mixed();
  const auto settings = full_setting_set();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_counts(rho, settings, 20000.0, 3));
  }
}
BENCHMARK(BM_SimulateCounts);

void BM_LinearInversion(benchmark::State& state) {
  const CountTable table = sample_table(20000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct_linear(table));
  }
}
BENCHMARK(BM_LinearInversion);

void BM_MleReconstruction(benchmark::State& state) {
  const CountTable table = sample_table(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct_mle(table));
  }
}
BENCHMARK(BM_MleReconstruction)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
