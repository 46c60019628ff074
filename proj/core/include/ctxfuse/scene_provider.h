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

// Scene label source for each image: ground truth, a prediction file, or a
// colour-histogram nearest-centroid classifier fitted on training images.

#ifndef CTXFUSE_SCENE_PROVIDER_H_
#define CTXFUSE_SCENE_PROVIDER_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxfuse/image_io.h"
#include "ctxfuse/types.h"

namespace ctxfuse {

struct ScenePrediction {
  std::string image_id;
  SceneLabel scene;
  double confidence = 1.0;
  friend bool operator==(const ScenePrediction&,
                         const ScenePrediction&) = default;
};

enum class SceneMode { kGroundTruth, kFile, kHistogram };

std::string_view SceneModeName(SceneMode mode);
SceneMode ParseSceneMode(std::string_view text);

struct SceneProviderConfig {
  SceneMode mode = SceneMode::kGroundTruth;
  // Prediction file (file mode) or fitted classifier state (histogram mode).
  std::optional<std::filesystem::path> file_path;
  int histogram_bins = 8;
  // Relative source_path values are resolved against this directory.
  std::filesystem::path image_root;
};

// {"predictions": [{"image_id", "scene", "confidence"}]}
std::vector<ScenePrediction> ParseScenePredictions(
    std::string_view json_text, const Dataset& dataset,
    std::string_view origin = "<memory>");
std::vector<ScenePrediction> LoadScenePredictions(
    const std::filesystem::path& path, const Dataset& dataset);
// Label-only validation against a scene vocabulary.
std::vector<ScenePrediction> LoadScenePredictions(
    const std::filesystem::path& path, std::span<const SceneLabel> scenes);
std::string SerializeScenePredictions(
    std::span<const ScenePrediction> predictions);
void SaveScenePredictions(std::span<const ScenePrediction> predictions,
                          const std::filesystem::path& path);

// Nearest-centroid classifier over L1-normalised joint RGB histograms with
// `bins` levels per channel (bins^3 dimensions). Confidence is the softmin of
// the L2 distances to every centroid; exact ties go to the earliest scene.
class HistogramClassifier {
 public:
  HistogramClassifier() = default;

  // Every scene class needs at least one selected image; pixel read errors
  // propagate.
  static HistogramClassifier Fit(const Dataset& dataset, SplitSelector split,
                                 int bins,
                                 const std::filesystem::path& image_root);
  static HistogramClassifier FromCentroids(
      int bins, std::vector<SceneLabel> scenes,
      std::vector<std::vector<double>> centroids);

  static std::vector<double> Histogram(const RgbImage& image, int bins);

  bool fitted() const { return !centroids_.empty(); }
  int bins() const { return bins_; }
  const std::vector<SceneLabel>& scenes() const { return scenes_; }
  const std::vector<std::vector<double>>& centroids() const {
    return centroids_;
  }

  // Returns (scene index, confidence). Throws Error if not fitted.
  std::pair<std::size_t, double> Classify(const RgbImage& image) const;

  std::string Serialize() const;
  static HistogramClassifier Parse(std::string_view json_text,
                                   std::string_view origin = "<memory>");
  void Save(const std::filesystem::path& path) const;
  static HistogramClassifier Load(const std::filesystem::path& path);

  friend bool operator==(const HistogramClassifier&,
                         const HistogramClassifier&) = default;

 private:
  int bins_ = 0;
  std::vector<SceneLabel> scenes_;
  std::vector<std::vector<double>> centroids_;
};

// Resolves image.source_path against `image_root`; ValidationError if the
// image has no source_path.
std::filesystem::path ResolveImagePath(const ImageRecord& image,
                                       const std::filesystem::path& image_root);

// IdentifyScene. Immutable after construction; Identify() is thread-safe.
class SceneProvider {
 public:
  static SceneProvider GroundTruth();
  static SceneProvider FromPredictions(std::vector<ScenePrediction> predictions,
                                       const Dataset& dataset);
  static SceneProvider FromClassifier(HistogramClassifier classifier,
                                      const Dataset& dataset,
                                      std::filesystem::path image_root);
  // Loads whatever the config points at.
  static SceneProvider Create(const SceneProviderConfig& config,
                              const Dataset& dataset);

  SceneMode mode() const { return mode_; }

  // Errors: missing prediction (file mode), unreadable pixels or unfitted
  // classifier (histogram mode).
  ScenePrediction Identify(const ImageRecord& image) const;

 private:
  SceneMode mode_ = SceneMode::kGroundTruth;
  std::unordered_map<std::string, ScenePrediction> predictions_;
  HistogramClassifier classifier_;
  std::filesystem::path image_root_;
};

}  // namespace ctxfuse

#endif  // CTXFUSE_SCENE_PROVIDER_H_
