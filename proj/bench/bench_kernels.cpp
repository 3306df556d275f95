// OpenMP kernels against their serial references.
//   ./msid_bench --benchmark_filter=Gram
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "msid/experiment.hpp"
#include "msid/infodyn.hpp"
#include "msid/kernels.hpp"

namespace {

const msid::SeriesData& series() {
  static const msid::SeriesData data =
      msid::simulate(msid::experiment::preset("bi"), 1'000'000, 1).data;
  return data;
}

void BM_GramParallel(benchmark::State& state) {
  const auto lags = static_cast<std::size_t>(state.range(0));
  (void)series();
  for (auto _ : state) benchmark::DoNotOptimize(msid::kernels::lagged_gram(series(), lags));
}

void BM_GramSerial(benchmark::State& state) {
  const auto lags = static_cast<std::size_t>(state.range(0));
  (void)series();
  for (auto _ : state) benchmark::DoNotOptimize(msid::kernels::serial::lagged_gram(series(), lags));
}

void BM_CoarseParallel(benchmark::State& state) {
  const auto mode = state.range(1) == 0 ? msid::Mode::avg : msid::Mode::dws;
  (void)series();
  for (auto _ : state) {
    benchmark::DoNotOptimize(msid::kernels::coarse_grain(series(), static_cast<int>(state.range(0)), mode));
  }
}

void BM_CoarseSerial(benchmark::State& state) {
  const auto mode = state.range(1) == 0 ? msid::Mode::avg : msid::Mode::dws;
  (void)series();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        msid::kernels::serial::coarse_grain(series(), static_cast<int>(state.range(0)), mode));
  }
}

std::vector<int> taus() {
  std::vector<int> out;
  for (int t = 1; t <= 20; ++t) out.push_back(t);
  return out;
}

void BM_SweepParallel(benchmark::State& state) {
  const auto model = msid::experiment::preset("bi");
  const std::vector<std::size_t> targets{0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(msid::multiscale_sweep(model, taus(), msid::Mode::dws, targets));
  }
}

void BM_SweepSerial(benchmark::State& state) {
  const auto model = msid::experiment::preset("bi");
  const std::vector<std::size_t> targets{0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(msid::multiscale_sweep_serial(model, taus(), msid::Mode::dws, targets));
  }
}

}  // namespace

BENCHMARK(BM_GramParallel)->Arg(6)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramSerial)->Arg(6)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoarseParallel)->Args({5, 0})->Args({5, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoarseSerial)->Args({5, 0})->Args({5, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
