// Copyright 2026 The eigbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "eigbridge/ensembles.hpp"
#include "eigbridge/limitcov.hpp"
#include "eigbridge/process.hpp"
#include "eigbridge/spectral.hpp"
#include "eigbridge/stats.hpp"

namespace {

using namespace eigbridge;

void BM_SampleCovariance(benchmark::State& state) {
  const Index n = state.range(0);
  const auto spec = make_atom_spec(GaussianReal{});
  const auto v = sample_data_matrix<Real>(spec, Dims(n, n), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(v));
}
BENCHMARK(BM_SampleCovariance)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Eigh(benchmark::State& state) {
  const Index n = state.range(0);
  const auto x = sample_covariance(sample_data_matrix<Real>(make_atom_spec(GaussianReal{}), Dims(n, n), 1));
  for (auto _ : state) benchmark::DoNotOptimize(eigh(x));
}
BENCHMARK(BM_Eigh)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_EighComplex(benchmark::State& state) {
  const Index n = state.range(0);
  const auto x =
      sample_covariance(sample_data_matrix<Complex>(make_atom_spec(GaussianComplexCircular{}), Dims(n, n), 1));
  for (auto _ : state) benchmark::DoNotOptimize(eigh(x));
}
BENCHMARK(BM_EighComplex)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Eigvalsh(benchmark::State& state) {
  const Index n = state.range(0);
  const auto x = sample_covariance(sample_data_matrix<Real>(make_atom_spec(GaussianReal{}), Dims(n, n), 1));
  for (auto _ : state) benchmark::DoNotOptimize(eigvalsh(x.entries));
}
BENCHMARK(BM_Eigvalsh)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BridgeGrid(benchmark::State& state) {
  const Index n = state.range(0);
  const RealMatrix w = haar_sample<Real>(n, 3).cwiseAbs2();
  const auto grid = uniform_grid(51);
  for (auto _ : state) benchmark::DoNotOptimize(bridge_grid(w, 1, grid, grid));
}
BENCHMARK(BM_BridgeGrid)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_HaarSample(benchmark::State& state) {
  const Index n = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(haar_sample<Real>(n, ++seed));
}
BENCHMARK(BM_HaarSample)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EnumeratePairs(benchmark::State& state) {
  const int k1 = static_cast<int>(state.range(0));
  const int k2 = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_pairs(k1, k2));
}
BENCHMARK(BM_EnumeratePairs)->Args({1, 1})->Args({2, 2})->Args({2, 3})->Args({3, 3})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
