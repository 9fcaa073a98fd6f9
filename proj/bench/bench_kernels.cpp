// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "intertwine/numlin.hpp"
#include "intertwine/reference.hpp"
#include "intertwine/scan.hpp"
#include "intertwine/vectorize.hpp"

using namespace intertwine;

namespace {

ComplexMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  }
  return a;
}

void BM_MatmulSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::matmul(a, b));
}

void BM_MatmulOmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}

void BM_KronSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 3), b = random_matrix(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::kron(a, b));
}

void BM_KronOmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 3), b = random_matrix(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}

void BM_ScanSerial(benchmark::State& state) {
  const ScanAxis g{0.0, 2.0, static_cast<int>(state.range(0))}, t{0.2, 4.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(phase_scan_serial(DimerModel::Classical, Waveform::DeltaKicks, g, t));
}

void BM_ScanOmp(benchmark::State& state) {
  const ScanAxis g{0.0, 2.0, static_cast<int>(state.range(0))}, t{0.2, 4.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(phase_scan(DimerModel::Classical, Waveform::DeltaKicks, g, t));
}

}  // namespace

BENCHMARK(BM_MatmulSerial)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_MatmulOmp)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_KronSerial)->Arg(8)->Arg(24);
BENCHMARK(BM_KronOmp)->Arg(8)->Arg(24);
BENCHMARK(BM_ScanSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_ScanOmp)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
