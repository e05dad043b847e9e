#include <benchmark/benchmark.h>

#include <limits>

#include "qdswap/swap/swap_engine.hpp"
#include "qdswap/swap/swap_montecarlo.hpp"

namespace {

using namespace qdswap;

SwapScenario measured_scenario() {
  SwapScenario sc;
  sc.source1.x_lifetime_ps = 25.0;
  sc.source1.xx_lifetime_ps = 16.0;
  sc.source1.fss_ueV = 1.2;
  sc.source1.g2_zero = 0.025;
  sc.source2 = sc.source1;
  sc.source2.fss_ueV = 2.4;
  sc.bsm_photon = Transition::X;
  sc.station = BsmStation::ideal();
  sc.station.detector_jitter_sigma_ps = 6.37;
  sc.noise.dephasing_time_x_ps = 120.0;
  sc.noise.dephasing_time_xx_ps = 70.0;
  sc.noise.noise_floor_scale = 5.3;
  sc.windows_ps = {20.0};
  return sc;
}

void BM_SwapAnalyticWindow(benchmark::State& state) {
  const SwapScenario sc = measured_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(swapped_state_analytic(sc, BellLabel::PsiMinus, 20.0));
  }
}
BENCHMARK(BM_SwapAnalyticWindow)->Unit(benchmark::kMillisecond);

void BM_SwapAnalyticFullWindow(benchmark::State& state) {
  const SwapScenario sc = measured_scenario();
  const double inf = std::numeric_limits<double>::infinity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(swapped_state_analytic(sc, BellLabel::PsiMinus, inf));
  }
}
BENCHMARK(BM_SwapAnalyticFullWindow)->Unit(benchmark::kMillisecond);

void BM_SwapMonteCarloShots(benchmark::State& state) {
  const SwapScenario sc = measured_scenario();
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        swapped_state_montecarlo(sc, BellLabel::PsiMinus, 20.0, shots, 7));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shots));
}
BENCHMARK(BM_SwapMonteCarloShots)->Arg(100000)->Arg(400000)->Unit(benchmark::kMillisecond);

}  // namespace
