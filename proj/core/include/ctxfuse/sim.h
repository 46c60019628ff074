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

// Synthetic datasets and detector outputs drawn from a known scene/object
// model, with a brute-force Bayes oracle for checking the fusion rules.
//
// Generative model, per image:
//   scene   ~ Categorical(scene_priors)
//   objects ~ Categorical(cond_matrix[:, scene]), a fixed or Poisson count
//   boxes   on a collision-free grid, so IoU matching is exact
// Per ground-truth object the detector emits candidate scores
//   scores ~ Dirichlet(concentration * target)
// where target puts detector_accuracy on the true label and spreads the rest
// over wrong labels (uniformly, or biased toward labels that share the
// scene). Candidates below candidate_cutoff are dropped. Scene predictions
// are correct with probability scene_classifier_accuracy, otherwise a
// uniformly chosen wrong scene.

#ifndef CTXFUSE_SIM_H_
#define CTXFUSE_SIM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxfuse/eval.h"
#include "ctxfuse/scene_provider.h"
#include "ctxfuse/scu.h"
#include "ctxfuse/stats.h"
#include "ctxfuse/types.h"

namespace ctxfuse {

enum class ConfusionSpread { kUniform, kWithinScene };

struct SimConfig {
  std::vector<SceneLabel> scenes;
  std::vector<double> scene_priors;
  std::vector<ObjectLabel> objects;
  std::vector<std::vector<double>> cond_matrix;  // [object][scene], P(o|s)
  std::size_t train_images = 0;
  std::size_t test_images = 0;
  std::size_t objects_per_image = 3;
  // When set, the per-image object count is Poisson with this mean instead.
  std::optional<double> objects_per_image_mean;
  double detector_accuracy = 0.6;
  ConfusionSpread confusion_spread = ConfusionSpread::kUniform;
  // Share of the wrong-label mass given to same-scene labels (within-scene
  // spread only).
  double within_scene_bias = 0.8;
  double concentration = 20.0;
  double candidate_cutoff = 1e-3;
  double scene_classifier_accuracy = 1.0;
  // Per-scene accuracy of the scene-specific detectors used by MNF; empty
  // means detector_accuracy for every scene.
  std::vector<double> scene_detector_accuracy;
  std::uint64_t seed = 42;
};

// Throws ValidationError on shape mismatches, priors/columns not summing to
// 1 +- 1e-9, or probabilities outside [0, 1].
void ValidateSimConfig(const SimConfig& config);

SimConfig ParseSimConfig(std::string_view json_text,
                         std::string_view origin = "<memory>");
SimConfig LoadSimConfig(const std::filesystem::path& path);
std::string SerializeSimConfig(const SimConfig& config);

struct SimOutput {
  Dataset dataset;
  std::vector<ScenePrediction> scene_predictions;  // test images
  std::vector<DetectionRecord> detections;         // test images, global net
  // Per scene (config order): output of that scene's specialised detector on
  // every test image.
  std::vector<std::vector<DetectionRecord>> scene_detections;
};

// A pure function of the config.
SimOutput Generate(const SimConfig& config);

// Writes manifest.json, scene_predictions.json, detections.json,
// scene_detections/<scene>.json and registry.json into out_dir.
void WriteSimOutputs(const SimOutput& output, const SimConfig& config,
                     const std::filesystem::path& out_dir);

// Co-occurrence table whose P(o|s) equals the config's cond_matrix: counts
// are the entries scaled by 1e6. Exact when every entry has at most six
// decimals and each column sums to exactly 1.
CooccurrenceTable TableFromConfig(const SimConfig& config);

// Exhaustive argmax over every object class of score x P(o|s) using the
// config's true cond_matrix; classes missing from the candidate list score
// 0. Ties go to the smaller label. If every product is 0 the context carries
// no information and the detector's own top candidate is returned.
ObjectLabel BayesOracle(const DetectionRecord& detection,
                        const SceneLabel& scene, const SimConfig& config);

enum class Pipeline { kBaseline, kScu, kMnf };

std::string_view PipelineName(Pipeline pipeline);
Pipeline ParsePipeline(std::string_view text);

struct ExperimentOptions {
  // Use ground-truth scenes instead of the simulated scene classifier.
  bool ground_truth_scenes = true;
  // SCU table: true -> TableFromConfig, false -> counted on the train split.
  bool exact_table = false;
  ScuOptions scu;
  int alpha = 1;  // MNF scene filter
};

struct ExperimentResult {
  Pipeline pipeline = Pipeline::kBaseline;
  EvalReport report;
  std::vector<DetectionRecord> predictions;
  // Matched boxes with the right label over all ground truth; equals total
  // recall.
  double accuracy = 0;
};

ExperimentResult RunExperiment(const SimConfig& config, Pipeline pipeline,
                               const ExperimentOptions& options = {});

}  // namespace ctxfuse

#endif  // CTXFUSE_SIM_H_
