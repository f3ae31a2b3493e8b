// Copyright 2026 The distest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "distest/channels.hpp"
#include "distest/equivalence_lab.hpp"
#include "distest/models.hpp"
#include "distest/protocols.hpp"
#include "distest/rng.hpp"
#include "distest/transforms.hpp"

namespace distest {
namespace {

void BM_SampleCounts(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SimplexVector q = SimplexVector::uniform(d);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_counts(q, 1024, seed++));
  }
}
BENCHMARK(BM_SampleCounts)->Arg(8)->Arg(64)->Arg(1024)->Arg(4096);

void BM_RootTransform(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SimplexVector q = SimplexVector::uniform(d);
  const CountVector counts = sample_counts(q, 1024, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(root_transform(counts));
  }
}
BENCHMARK(BM_RootTransform)->Arg(8)->Arg(1024)->Arg(4096);

void BM_SharedRotationMake(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SharedRandomness::make(seed++, d, d / 2));
  }
}
BENCHMARK(BM_SharedRotationMake)->Arg(16)->Arg(64)->Arg(256);

void BM_QuantizeShared(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SharedRandomness shared = SharedRandomness::make(3, d, d / 2);
  Rng rng(5);
  const std::vector<double> v = rng.normal_vector(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantize_shared(v, d / 2, shared, 0));
  }
}
BENCHMARK(BM_QuantizeShared)->Arg(16)->Arg(64)->Arg(256);

void BM_ProtocolStatistic(benchmark::State& state) {
  ProtocolSpec spec;
  spec.model = ModelKind::multinomial;
  spec.constraint = ConstraintKind::none;
  spec.aggregator = AggregatorKind::pooled_chi2;
  spec.m = static_cast<std::size_t>(state.range(0));
  spec.n = 64;
  spec.d = 8;
  spec.shared_seed = 9;
  const ProtocolRunner runner(spec);
  const Truth null = runner.null_truth();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(runner.statistic(null, seed++));
  }
}
BENCHMARK(BM_ProtocolStatistic)->Arg(2)->Arg(8)->Arg(32);

void BM_Calibrate(benchmark::State& state) {
  ProtocolSpec spec;
  spec.model = ModelKind::multinomial;
  spec.constraint = ConstraintKind::none;
  spec.aggregator = AggregatorKind::pooled_chi2;
  spec.m = 4;
  spec.n = 64;
  spec.d = 8;
  spec.shared_seed = 9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate(spec, 0.25, 1000, 3, 1));
  }
}
BENCHMARK(BM_Calibrate);

void BM_TvExact(benchmark::State& state) {
  const std::size_t bins = static_cast<std::size_t>(state.range(0));
  const auto a = discretize_gaussian(0.5, 0.1, 0.0, 1.0, bins);
  const auto b = discretize_gaussian(0.52, 0.1, 0.0, 1.0, bins);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tv_exact(a.measure, b.measure));
  }
}
BENCHMARK(BM_TvExact)->Arg(256)->Arg(1024)->Arg(4096);

void BM_RootBinKernel(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(root_bin_kernel(n, 0.0, 1.5, 1024, 0.25));
  }
}
BENCHMARK(BM_RootBinKernel)->Arg(16)->Arg(64)->Arg(256);

void BM_MaximalCoupling(benchmark::State& state) {
  const FiniteMeasure p{{0.0, 1.0, 2.0}, {0.2, 0.5, 0.3}};
  const FiniteMeasure q{{0.0, 1.0, 2.0}, {0.4, 0.3, 0.3}};
  Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_coupling(p, q, rng));
  }
}
BENCHMARK(BM_MaximalCoupling);

}  // namespace
}  // namespace distest

BENCHMARK_MAIN();
