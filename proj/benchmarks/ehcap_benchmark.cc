// Copyright 2026 The ehcap Authors
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

#include "ehcap/aloha.h"
#include "ehcap/csma.h"
#include "ehcap/energy_queue.h"
#include "ehcap/montecarlo.h"
#include "ehcap/numerics.h"

namespace ehcap {
namespace {

const ChannelParams kChannel(3.0, 2.0, 2.0);

void BM_LambertW0(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w0(x));
    x = x < 1e6 ? x * 1.37 : 0.01;
  }
}
BENCHMARK(BM_LambertW0);

void BM_SpatialIntegral(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(csma_spatial_integral(ell, 0.5, kChannel));
  }
}
BENCHMARK(BM_SpatialIntegral)->Arg(1)->Arg(4)->Arg(16);

void BM_OccupancyFinite(benchmark::State& state) {
  const int capacity = static_cast<int>(state.range(0));
  double q = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(occupancy_finite(0.5, q, capacity));
    q = q < 0.95 ? q + 0.001 : 0.1;
  }
}
BENCHMARK(BM_OccupancyFinite)->Arg(1)->Arg(10)->Arg(1000);

void BM_OccupancyOracle(benchmark::State& state) {
  const int capacity = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(occupancy_finite_oracle(0.5, 0.4, capacity));
  }
}
BENCHMARK(BM_OccupancyOracle)->Arg(10)->Arg(100);

void BM_EvaluateCsma(benchmark::State& state) {
  const CsmaParams params(
      NetworkParams(0.01, kChannel, EnergyModel::unbounded(0.5)),
      static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_csma(params));
}
BENCHMARK(BM_EvaluateCsma)->Arg(1)->Arg(4);

void BM_AlohaEstimate(benchmark::State& state) {
  const NetworkParams params(0.1, kChannel, EnergyModel::unbounded(0.5));
  SimConfig config = SimConfig::for_channel(kChannel);
  config.trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_aloha_psuc(params, 0.23, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlohaEstimate)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_CsmaEstimate(benchmark::State& state) {
  const CsmaParams params(
      NetworkParams(0.01, kChannel, EnergyModel::unbounded(0.5)), 2);
  SimConfig config = SimConfig::for_channel(kChannel);
  config.trials = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_csma(params, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CsmaEstimate)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_EnergyQueueSimulation(benchmark::State& state) {
  const EnergyModel energy = EnergyModel::finite(0.5, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_energy_queue(energy, 0.5, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnergyQueueSimulation)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ehcap

BENCHMARK_MAIN();
