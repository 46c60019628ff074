/*
 * Copyright 2026 The ctxfuse Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <benchmark/benchmark.h>

#include <filesystem>

#include "ctxfuse/eval.h"
#include "ctxfuse/render.h"
#include "ctxfuse/sim.h"

namespace ctxfuse {
namespace {

SimOutput EvalInput(std::size_t test_images) {
  SimConfig c = LoadSimConfig(std::filesystem::path(CTXFUSE_SOURCE_DIR) /
                              "configs/sim_default.json");
  c.test_images = test_images;
  return Generate(c);
}

void BM_Evaluate(benchmark::State& state) {
  const SimOutput out = EvalInput(static_cast<std::size_t>(state.range(0)));
  const SceneClusterKey key = ComputeClusterKey(out.dataset, SplitSelector::kTrain);
  const auto thresholds = DefaultThresholds();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Evaluate(out.dataset, out.detections, key, {}, thresholds));
  }
}
BENCHMARK(BM_Evaluate)->Arg(300)->Arg(3000);

void BM_ConfusionSvg(benchmark::State& state) {
  const SimOutput out = EvalInput(300);
  const double thr[] = {0.0};
  const EvalReport report =
      Evaluate(out.dataset, out.detections,
               ComputeClusterKey(out.dataset, SplitSelector::kTrain), {}, thr);
  for (auto _ : state) benchmark::DoNotOptimize(ConfusionSvg(report));
}
BENCHMARK(BM_ConfusionSvg);

}  // namespace
}  // namespace ctxfuse
