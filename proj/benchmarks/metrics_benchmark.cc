// Copyright 2026 The svbias Authors.
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

#include "svbias/detection_metrics.h"
#include "svbias/meta_measures.h"
#include "svbias/synth_gen.h"

namespace {

svbias::SynthData Data(int64_t per_group, int groups) {
  svbias::SynthSpec spec;
  spec.seed = 1;
  for (int g = 0; g < groups; ++g) {
    svbias::GroupScoreModel m;
    m.group = svbias::GroupKey({"g"}, {"group" + std::to_string(g)});
    m.mu_target = 2.0 + 0.25 * g;
    m.mu_nontarget = 0.1 * g;
    m.n_target = per_group / 5;
    m.n_nontarget = per_group - per_group / 5;
    spec.models.push_back(m);
  }
  return svbias::Generate(spec);
}

svbias::GroupedTrials Grouped(const svbias::SynthData& data) {
  return svbias::AssignGroups(data.trials, data.metadata, data.attribute_names,
                              svbias::GroupingPolicy::kBothMatch);
}

void BM_Sweep(benchmark::State& state) {
  const auto data = Data(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svbias::ComputeSweep(data.trials));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_EerAndMinCdet(benchmark::State& state) {
  const auto data = Data(state.range(0), 1);
  const auto curve = svbias::ComputeSweep(data.trials);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svbias::ComputeEer(curve));
    benchmark::DoNotOptimize(svbias::ComputeMinCdet(curve, svbias::DcfParams{}));
  }
}
BENCHMARK(BM_EerAndMinCdet)->Arg(100000)->Arg(1000000);

void BM_SubsampledSweep(benchmark::State& state) {
  const auto data = Data(1000000, 1);
  const svbias::SweepOptions options{static_cast<size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(svbias::ComputeSweep(data.trials, options));
  }
}
BENCHMARK(BM_SubsampledSweep)->Arg(1000)->Arg(100000);

void BM_DisaggregateEer(benchmark::State& state) {
  const auto grouped = Grouped(Data(50000, static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        svbias::DisaggregateTrialMetric(grouped, svbias::EerMetric{}));
  }
}
BENCHMARK(BM_DisaggregateEer)->Arg(4)->Arg(16);

void BM_FdrGrid(benchmark::State& state) {
  const auto grouped = Grouped(Data(50000, 8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(svbias::ComputeFdrGrid(grouped, svbias::kStandardDesignFprs,
                                                    svbias::kStandardAlphas));
  }
}
BENCHMARK(BM_FdrGrid);

}  // namespace

BENCHMARK_MAIN();
