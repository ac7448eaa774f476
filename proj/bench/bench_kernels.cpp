// Serial reference kernels against their OpenMP counterparts. The OpenMP
// variants take the thread count as the benchmark argument.

#include <benchmark/benchmark.h>

#include "bisam/kernels.hpp"

namespace {

using namespace bisam;

IndependentModel model(Count n, Count m) {
  IndependentModel mdl;
  mdl.n = n;
  mdl.m = m;
  mdl.probabilities = uniform_probabilities(n, 0.0, 0.2, 11);
  mdl.seed = 11;
  return mdl;
}

const TransactionDatabase& database() {
  static const TransactionDatabase db = kernels::serial::generate_independent(model(200, 20000));
  return db;
}

const PreparedDatabase& prepared() {
  static const PreparedDatabase p(database(), 1);
  return p;
}

SamplingConfig sampling() {
  SamplingConfig c;
  c.measure = MeasureSpec(MeasureKind::cosine);
  c.delta = 0.1;
  c.mu = 15;
  return c;
}

void BM_CountSupportsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::count_supports(database()));
  state.SetItemsProcessed(state.iterations() * database().item_occurrences());
}
void BM_CountSupportsOmp(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::count_supports(database(), threads));
  state.SetItemsProcessed(state.iterations() * database().item_occurrences());
}

void BM_SortTransactionsSerial(benchmark::State& state) {
  const auto& supports = prepared().supports();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::sort_transactions(database(), supports));
  }
}
void BM_SortTransactionsOmp(benchmark::State& state) {
  const auto& supports = prepared().supports();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::omp::sort_transactions(database(), supports, threads));
  }
}

void BM_SamplePairsSerial(benchmark::State& state) {
  const auto config = sampling();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::sample_pairs(prepared(), config));
}
void BM_SamplePairsOmp(benchmark::State& state) {
  const auto config = sampling();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::omp::sample_pairs(prepared(), config, threads));
  }
}

void BM_CountPairsSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::count_pairs(prepared(), kDefaultPairBudget));
  }
}
void BM_CountPairsOmp(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::omp::count_pairs(prepared(), kDefaultPairBudget, threads));
  }
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto mdl = model(200, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::generate_independent(mdl));
}
void BM_GenerateOmp(benchmark::State& state) {
  const auto mdl = model(200, 5000);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::generate_independent(mdl, threads));
}

BENCHMARK(BM_CountSupportsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSupportsOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SortTransactionsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SortTransactionsOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePairsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePairsOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountPairsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountPairsOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
