// Copyright 2026 The ghzguard Authors
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

#include "ghzguard/montecarlo.hpp"
#include "ghzguard/protocols.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace ghzguard;

void BM_GhzBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ghz_basis(n));
}
BENCHMARK(BM_GhzBasis)->DenseRange(2, 8, 2);

void BM_BitflipExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<int> qubits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) qubits[static_cast<std::size_t>(i)] = i;
  const Matrix rho = DensityMatrix::maximally_mixed(n).entries();
  const NoiseSpec spec(0.05, qubits, NoiseMode::kExact);
  for (auto _ : state) benchmark::DoNotOptimize(apply_bitflip(rho, n, spec));
}
BENCHMARK(BM_BitflipExact)->DenseRange(2, 8, 2);

void BM_TeleportGhz(benchmark::State& state) {
  const auto mode = state.range(0) ? NoiseMode::kExact : NoiseMode::kFirstOrder;
  const TeleportInput in{std::cos(0.4), std::sin(0.4), {0.05, mode}};
  for (auto _ : state) benchmark::DoNotOptimize(teleport_ghz(in, true));
}
BENCHMARK(BM_TeleportGhz)->Arg(0)->Arg(1);

void BM_DenseGhz(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(dense_ghz({1, 0}, {0.05, NoiseMode::kFirstOrder}, true));
  }
}
BENCHMARK(BM_DenseGhz);

void BM_NghzEfficiency(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nghz_efficiency(n, 0.05));
}
BENCHMARK(BM_NghzEfficiency)->DenseRange(3, 6);

void BM_LiftTeleportation(benchmark::State& state) {
  const EprTask task = teleportation_task(StateVector::from_bits("1"));
  for (auto _ : state) {
    const GhzTask lifted = lift_epr_task(task, 3);
    benchmark::DoNotOptimize(run_lifted_with_noise(lifted, {0.05, NoiseMode::kFirstOrder}, true));
  }
}
BENCHMARK(BM_LiftTeleportation);

void BM_Trajectories(benchmark::State& state) {
  TrajectoryConfig c;
  c.protocol = ProtocolId::kTeleportGhz;
  c.noise = {0.05, NoiseMode::kExact};
  c.shots = static_cast<std::uint64_t>(state.range(0));
  c.alpha0 = std::cos(0.4);
  c.alpha1 = std::sin(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(run_trajectories(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Trajectories)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
