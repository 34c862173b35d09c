#include <benchmark/benchmark.h>

#include <random>

#include "identent/dynamics.hpp"
#include "identent/factorizations.hpp"
#include "identent/models.hpp"

using namespace identent;

namespace {

ComplexMatrix random_structured(int n, bool symmetric, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return symmetric ? (0.5 * (m + m.transpose())).eval() : (0.5 * (m - m.transpose())).eval();
}

void BM_Takagi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix m = random_structured(n, true, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(takagi(m));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Takagi)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_AntisymCanonical(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix m = random_structured(n, false, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(antisym_canonical(m));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_AntisymCanonical)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_CanonicalSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix m = random_structured(n, true, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_spectrum(m, Species::Boson));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_CanonicalSpectrum)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_BoseAveragePipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InfiniteRangeBoseModel bose(n, 0.1);
  for (auto _ : state) {
    const SpectralDecomposition spec = two_particle_spectrum(bose.model(), Species::Boson);
    benchmark::DoNotOptimize(average_entanglement(bose.default_initial_state(), spec));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BoseAveragePipeline)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_MonteCarloSampling(benchmark::State& state) {
  const long samples = state.range(0);
  const InfiniteRangeBoseModel bose(8, 0.1);
  const SpectralDecomposition spec = two_particle_spectrum(bose.model(), Species::Boson);
  const TwoParticleState initial = bose.default_initial_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_phase_average(initial, spec, samples, 1));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_MonteCarloSampling)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
