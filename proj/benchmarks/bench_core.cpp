#include <benchmark/benchmark.h>

#include "mertens/bounds.hpp"
#include "mertens/ensemble.hpp"
#include "mertens/mobius.hpp"
#include "mertens/transfer_matrix.hpp"

namespace {

void BM_LinearSieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mertens::mobius_sieve(limit));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LinearSieve)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_SegmentedMertens(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  const mertens::SieveOptions opts{static_cast<std::size_t>(state.range(1)), 1};
  for (auto _ : state) {
    std::int64_t last = 0;
    mertens::for_each_mertens(1, limit, 0, opts,
                              [&](std::uint64_t, std::span<const std::int64_t> v) {
                                last = v.back();
                              });
    benchmark::DoNotOptimize(last);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SegmentedMertens)
    ->Args({10'000'000, 1 << 16})
    ->Args({10'000'000, 1 << 22})
    ->Unit(benchmark::kMillisecond);

void BM_MertensRecurrence(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mertens::mertens_recurrence(n));
}
BENCHMARK(BM_MertensRecurrence)
    ->Arg(10'000'000)
    ->Arg(1'000'000'000)
    ->Unit(benchmark::kMillisecond);

void BM_MobiusTrial(benchmark::State& state) {
  std::uint64_t k = 1'000'000'007;
  for (auto _ : state) benchmark::DoNotOptimize(mertens::mobius_trial(k++));
}
BENCHMARK(BM_MobiusTrial);

void BM_PartitionTransfer(benchmark::State& state) {
  const auto params = mertens::ising::ModelParams::from_weights(2.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(mertens::ising::partition_transfer(100, params));
}
BENCHMARK(BM_PartitionTransfer);

void BM_PartitionBruteForce(benchmark::State& state) {
  const auto params = mertens::ising::ModelParams::from_weights(2.0, 1.5);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mertens::ising::partition_bruteforce(n, params));
}
BENCHMARK(BM_PartitionBruteForce)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_NormalQuantile(benchmark::State& state) {
  double alpha = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mertens::bounds::normal_quantile(alpha));
    alpha = alpha < 0.9 ? alpha + 0.001 : 0.01;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_SampleEnergy(benchmark::State& state) {
  auto model = mertens::ensemble::RandomSequenceModel::canonical(0.5, 10'000, 7);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mertens::ensemble::sample_energy(model, i++));
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_SampleEnergy);

}  // namespace

BENCHMARK_MAIN();
