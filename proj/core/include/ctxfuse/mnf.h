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

// Multi-network fusion: split the training set by scene so one detector can
// be trained per scene, then send every test image to the detection source
// registered for its predicted scene.

#ifndef CTXFUSE_MNF_H_
#define CTXFUSE_MNF_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxfuse/scene_provider.h"
#include "ctxfuse/types.h"

namespace ctxfuse {

struct ScenePartition {
  SceneLabel scene;
  std::size_t images = 0;
  std::size_t objects = 0;
  std::filesystem::path manifest_path;
};

struct PartitionSpec {
  int alpha = 1;
  std::vector<ScenePartition> retained;  // dataset scene order
  std::vector<std::pair<SceneLabel, std::size_t>> excluded;  // scene, images
};

// File stem used for a scene's manifest: the name with path separators and
// control characters replaced by '_'.
std::string SceneFileStem(const SceneLabel& scene);

// Train images of one scene, same vocabularies.
Dataset SceneTrainSubset(const Dataset& dataset, const SceneLabel& scene);

// Writes <out_dir>/<scene>.manifest.json for every scene with >= alpha train
// images and <out_dir>/partition_report.json. Throws ValidationError if no
// scene qualifies and IoError if out_dir is not writable.
PartitionSpec PartitionTrain(const Dataset& dataset, int alpha,
                             const std::filesystem::path& out_dir);

std::string SerializePartitionReport(const PartitionSpec& spec);

// Anything that yields detections for an image: a file written by an
// externally trained network, or a scripted table in tests.
class DetectionSource {
 public:
  virtual ~DetectionSource() = default;
  // Empty when the source has nothing for this image.
  virtual std::vector<DetectionRecord> Detect(const ImageRecord& image) const = 0;
  virtual bool Covers(std::string_view image_id) const = 0;
};

class RecordDetectionSource : public DetectionSource {
 public:
  explicit RecordDetectionSource(std::vector<DetectionRecord> records);
  static std::shared_ptr<RecordDetectionSource> FromFile(
      const std::filesystem::path& path, const Dataset& dataset);

  std::vector<DetectionRecord> Detect(const ImageRecord& image) const override;
  bool Covers(std::string_view image_id) const override;

 private:
  std::unordered_map<std::string, std::vector<DetectionRecord>> by_image_;
};

// Scripted mock: image_id -> exact list of records to return.
class ScriptedDetectionSource : public DetectionSource {
 public:
  void Script(std::string image_id, std::vector<DetectionRecord> records);

  std::vector<DetectionRecord> Detect(const ImageRecord& image) const override;
  bool Covers(std::string_view image_id) const override;

 private:
  std::unordered_map<std::string, std::vector<DetectionRecord>> script_;
};

inline constexpr std::string_view kFallbackSourceName = "__fallback__";

// Scene label -> detection source, plus an optional global fallback.
class SceneNetRegistry {
 public:
  void Register(const SceneLabel& scene,
                std::shared_ptr<const DetectionSource> source);
  void SetFallback(std::shared_ptr<const DetectionSource> source);

  const DetectionSource* Find(const SceneLabel& scene) const;
  const DetectionSource* fallback() const { return fallback_.get(); }
  std::vector<SceneLabel> scenes() const;

  // Throws ValidationError unless every scene in `retained` has an entry.
  void RequireScenes(const std::vector<SceneLabel>& retained) const;

  // {"fallback": "path"?, "entries": {"<scene>": "<detections path>"}}.
  // Relative paths resolve against the registry file's directory.
  static SceneNetRegistry Load(const std::filesystem::path& path,
                               const Dataset& dataset);

 private:
  std::map<std::string, std::shared_ptr<const DetectionSource>> entries_;
  std::shared_ptr<const DetectionSource> fallback_;
};

enum class MissingScenePolicy {
  kFallback,  // use the global source, or emit nothing if none is set
  kError,
};

struct RouteOptions {
  MissingScenePolicy missing_scene = MissingScenePolicy::kFallback;
  // Stamp each routed record with the name of the source that produced it.
  bool tag_source = true;
};

enum class RouteDecision { kScene, kFallback, kDropped };

struct RouteResult {
  std::vector<DetectionRecord> records;
  RouteDecision decision = RouteDecision::kScene;
  std::string source;  // scene name, kFallbackSourceName, or empty
  // The chosen source had no entry for the image.
  bool source_missing_image = false;
};

RouteResult Route(const ImageRecord& image, const ScenePrediction& scene_pred,
                  const SceneNetRegistry& registry,
                  const RouteOptions& options = {});

struct MnfResult {
  std::vector<DetectionRecord> records;
  std::map<std::string, std::size_t> images_per_source;
  std::size_t fallback_images = 0;
  std::size_t dropped_images = 0;
  std::vector<std::string> warnings;
};

// Routes every test image in dataset order.
MnfResult RunMnf(const Dataset& dataset, const SceneProvider& provider,
                 const SceneNetRegistry& registry,
                 const RouteOptions& options = {});

std::string SerializeMnfSummary(const MnfResult& result);

}  // namespace ctxfuse

#endif  // CTXFUSE_MNF_H_
