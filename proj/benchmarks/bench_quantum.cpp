#include <benchmark/benchmark.h>

#include "qdswap/common/rng.hpp"
#include "qdswap/quantum/two_qubit.hpp"

namespace {

using namespace qdswap;

DensityMatrix2Q random_density(Rng& rng) {
  Matrix4c g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Matrix4c m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix2Q::make(m);
}

void BM_FullyEntangledFraction(benchmark::State& state) {
  Rng rng(1);
  const DensityMatrix2Q rho = random_density(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fully_entangled_fraction(rho));
  }
}
BENCHMARK(BM_FullyEntangledFraction);

void BM_Concurrence(benchmark::State& state) {
  Rng rng(2);
  const DensityMatrix2Q rho = random_density(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(concurrence(rho));
  }
}
BENCHMARK(BM_Concurrence);

void BM_DensityValidation(benchmark::State& state) {
  Rng rng(3);
  const DensityMatrix2Q rho = random_density(rng);
  const Matrix4c m = rho.matrix();
  for (auto _ : state) {
    benchmark::DoNotOptimize(DensityMatrix2Q::make(m));
  }
}
BENCHMARK(BM_DensityValidation);

}  // namespace
