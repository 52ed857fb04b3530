// Copyright 2026 The phasemc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "phasemc/ensemble.hpp"
#include "phasemc/linalg.hpp"
#include "phasemc/propagator.hpp"
#include "phasemc/reference.hpp"

namespace {

using namespace phasemc;

HermitianOperator chain_hamiltonian(Eigen::Index n) {
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    h(j, j + 1) = -1.0;
    h(j + 1, j) = -1.0;
  }
  return HermitianOperator(std::move(h));
}

ComplexVector first_site(Eigen::Index n) {
  ComplexVector z = ComplexVector::Zero(n);
  z[0] = 1.0;
  return z;
}

void BM_StepExactPhase(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const HermitianOperator h = chain_hamiltonian(n);
  SimulationParams p;
  p.tau = 1e-3;
  p.gamma = 1.0;
  p.t_max = 1.0;
  ComplexVector z = first_site(n);
  double xi = 0.37;
  for (auto _ : state) {
    z = step_exact_phase(z, h, p, xi);
    xi = -xi;
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepExactPhase)->Arg(2)->Arg(6)->Arg(12)->Arg(64)->Arg(200);

void BM_RunTrajectory(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const HermitianOperator h = chain_hamiltonian(n);
  SimulationParams p;
  p.tau = 1e-3;
  p.gamma = 1.0;
  p.t_max = 0.1;
  p.record_stride = p.step_count();
  const NoiseSampler sampler(NoiseDist::kGaussian, p.gamma, 1);
  const ComplexVector z0 = first_site(n);
  std::uint64_t traj = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(z0, h, p, sampler, traj++).final_state.data());
  }
  state.SetItemsProcessed(state.iterations() * p.step_count());
}
BENCHMARK(BM_RunTrajectory)->Arg(2)->Arg(6)->Arg(12);

void BM_UnitaryPropagator(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const HermitianOperator h = chain_hamiltonian(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(unitary_propagator(h, 1.0, 1.0).data());
  }
}
BENCHMARK(BM_UnitaryPropagator)->Arg(6)->Arg(12)->Arg(64)->Arg(200);

void BM_Accumulate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  EnsembleAccumulator acc(n);
  ComplexVector z = first_site(n);
  for (auto _ : state) {
    acc.accumulate(z);
    benchmark::DoNotOptimize(acc.count());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Accumulate)->Arg(2)->Arg(6)->Arg(12)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
