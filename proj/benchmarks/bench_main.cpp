#include <benchmark/benchmark.h>

#include "zeta4/ladder.hpp"
#include "zeta4/quad.hpp"
#include "zeta4/specfun.hpp"

namespace {

void BM_theta(benchmark::State& state) {
  long double t = 1e5L;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta4::theta(t));
    t += 0.001L;
  }
}
BENCHMARK(BM_theta);

void BM_riemann_siegel(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(zeta4::riemann_siegel_z(t, k));
}
BENCHMARK(BM_riemann_siegel)->Args({10'000, 1})->Args({10'000, 4})->Args({1'000'000, 4});

void BM_oracle(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zeta4::zeta_oracle(t));
}
BENCHMARK(BM_oracle)->Arg(100)->Arg(1000)->Arg(10000);

void BM_z_on_grid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zeta4::z_on_grid(1e4, 0.01, n, 4));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_z_on_grid)->Arg(1024)->Arg(16384);

void BM_integrate_z4(benchmark::State& state) {
  const double U = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zeta4::integrate_z4(1e4, U, 1e-9).value);
}
BENCHMARK(BM_integrate_z4)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_build_ladder(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(zeta4::build_ladder(1e4, 100.0, 0.01).phi.back());
}
BENCHMARK(BM_build_ladder)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
