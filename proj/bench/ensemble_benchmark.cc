/* Copyright 2026 The etdos Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Serial reference vs. OpenMP kernels on the batch-reactor workload.
// Thread count follows OMP_NUM_THREADS.

#include <cstdint>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "etdos/ensemble.h"
#include "etdos/scenario.h"

namespace etdos {
namespace {

const ScenarioConfig& Scenario() {
  static const ScenarioConfig s =
      LoadScenario(std::string(ETDOS_SCENARIO_DIR) + "/batch_reactor_dos.json");
  return s;
}

const SynthesisCertificate& Certificate() {
  static const SynthesisCertificate c =
      ComputeCertificate(Scenario().synthesis, Scenario().riccati);
  return c;
}

std::vector<SimulationConfig> Configs(std::size_t count) {
  std::vector<SimulationConfig> out;
  for (std::size_t i = 0; i < count; ++i) {
    ScenarioConfig s = Scenario();
    s.uncertainty.mode = UncertaintyMode::kPerStep;
    s.uncertainty.p_min = 0.0;
    s.uncertainty.p_max = 0.1;
    s.uncertainty.seed = i;
    s.dos.source = DosSource::kGenerate;
    s.dos.style = static_cast<DosStyle>(i % 2);
    s.dos.seed = i;
    out.push_back(
        MakeSimulationConfig(s, Certificate(), ResolveDosSignal(s, Certificate())));
  }
  return out;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto configs = Configs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RunEnsembleSerial(configs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto configs = Configs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RunEnsembleParallel(configs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = MaxThreads();
}

std::vector<std::uint64_t> Seeds(std::int64_t n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

void BM_DosFuzzSerial(benchmark::State& state) {
  const DosBudget b = DosBudget::FromCertificate(Certificate());
  const auto seeds = Seeds(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        GenerateBatchSerial(120, b, seeds, DosStyle::kUniformRandom));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DosFuzzParallel(benchmark::State& state) {
  const DosBudget b = DosBudget::FromCertificate(Certificate());
  const auto seeds = Seeds(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        GenerateBatchParallel(120, b, seeds, DosStyle::kUniformRandom));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AlphaSweepSerial(benchmark::State& state) {
  const auto grid = AlphaGrid(0.1, 10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AlphaSweepSerial(Scenario().synthesis, grid,
                                              *Scenario().reference_K,
                                              Scenario().reference_L));
  }
}

void BM_AlphaSweepParallel(benchmark::State& state) {
  const auto grid = AlphaGrid(0.1, 10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AlphaSweepParallel(Scenario().synthesis, grid,
                                                *Scenario().reference_K,
                                                Scenario().reference_L));
  }
}

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DosFuzzSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DosFuzzParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaSweepSerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaSweepParallel)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace etdos

BENCHMARK_MAIN();
