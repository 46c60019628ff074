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

#include "ctxfuse/mnf.h"

#include <cctype>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "ctxfuse/parallel.h"
#include "json_util.h"

namespace ctxfuse {

using internal::Json;

std::string SceneFileStem(const SceneLabel& scene) {
  std::string stem = scene.name();
  for (char& c : stem) {
    if (c == '/' || c == '\\' || std::iscntrl(static_cast<unsigned char>(c))) {
      c = '_';
    }
  }
  if (stem == "." || stem == "..") stem = "_" + stem;
  return stem;
}

Dataset SceneTrainSubset(const Dataset& dataset, const SceneLabel& scene) {
  return dataset.Subset([&](const ImageRecord& image) {
    return image.split == Split::kTrain && image.scene == scene;
  });
}

PartitionSpec PartitionTrain(const Dataset& dataset, int alpha,
                             const std::filesystem::path& out_dir) {
  if (alpha < 1) throw ValidationError("alpha must be >= 1");
  if (dataset.ImageCount(SplitSelector::kTrain) == 0) {
    throw ValidationError("dataset has no train split");
  }
  PartitionSpec spec;
  spec.alpha = alpha;
  std::vector<Dataset> subsets;
  for (const auto& scene : dataset.scene_classes()) {
    Dataset subset = SceneTrainSubset(dataset, scene);
    const std::size_t images = subset.images().size();
    if (images < static_cast<std::size_t>(alpha)) {
      spec.excluded.emplace_back(scene, images);
      continue;
    }
    spec.retained.push_back(ScenePartition{
        scene, images, subset.DetectionCount(SplitSelector::kAll),
        out_dir / (SceneFileStem(scene) + ".manifest.json")});
    subsets.push_back(std::move(subset));
  }
  if (spec.retained.empty()) {
    throw ValidationError("no scene has at least alpha=" +
                          std::to_string(alpha) + " training images");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    SaveManifest(subsets[i], spec.retained[i].manifest_path);
  }
  WriteTextFile(out_dir / "partition_report.json",
                SerializePartitionReport(spec));
  return spec;
}

std::string SerializePartitionReport(const PartitionSpec& spec) {
  Json root = Json::object();
  root["alpha"] = spec.alpha;
  Json retained = Json::array();
  for (const auto& p : spec.retained) {
    Json item = Json::object();
    item["scene"] = p.scene.name();
    item["images"] = p.images;
    item["objects"] = p.objects;
    item["manifest"] = p.manifest_path.filename().string();
    retained.push_back(std::move(item));
  }
  root["retained"] = std::move(retained);
  Json excluded = Json::array();
  for (const auto& [scene, images] : spec.excluded) {
    Json item = Json::object();
    item["scene"] = scene.name();
    item["images"] = images;
    excluded.push_back(std::move(item));
  }
  root["excluded"] = std::move(excluded);
  return internal::DumpJson(root);
}

RecordDetectionSource::RecordDetectionSource(
    std::vector<DetectionRecord> records) {
  for (auto& rec : records) {
    std::string id = rec.image_id;
    by_image_[id].push_back(std::move(rec));
  }
}

std::shared_ptr<RecordDetectionSource> RecordDetectionSource::FromFile(
    const std::filesystem::path& path, const Dataset& dataset) {
  return std::make_shared<RecordDetectionSource>(LoadDetections(path, dataset));
}

std::vector<DetectionRecord> RecordDetectionSource::Detect(
    const ImageRecord& image) const {
  auto it = by_image_.find(image.image_id);
  return it == by_image_.end() ? std::vector<DetectionRecord>{} : it->second;
}

bool RecordDetectionSource::Covers(std::string_view image_id) const {
  return by_image_.contains(std::string(image_id));
}

void ScriptedDetectionSource::Script(std::string image_id,
                                     std::vector<DetectionRecord> records) {
  script_[std::move(image_id)] = std::move(records);
}

std::vector<DetectionRecord> ScriptedDetectionSource::Detect(
    const ImageRecord& image) const {
  auto it = script_.find(image.image_id);
  return it == script_.end() ? std::vector<DetectionRecord>{} : it->second;
}

bool ScriptedDetectionSource::Covers(std::string_view image_id) const {
  return script_.contains(std::string(image_id));
}

void SceneNetRegistry::Register(const SceneLabel& scene,
                                std::shared_ptr<const DetectionSource> source) {
  if (!source) throw ValidationError("null detection source");
  if (!entries_.emplace(scene.name(), std::move(source)).second) {
    throw ValidationError("scene \"" + scene.name() +
                          "\" registered twice");
  }
}

void SceneNetRegistry::SetFallback(
    std::shared_ptr<const DetectionSource> source) {
  fallback_ = std::move(source);
}

const DetectionSource* SceneNetRegistry::Find(const SceneLabel& scene) const {
  auto it = entries_.find(scene.name());
  return it == entries_.end() ? nullptr : it->second.get();
}

std::vector<SceneLabel> SceneNetRegistry::scenes() const {
  std::vector<SceneLabel> out;
  for (const auto& [name, source] : entries_) out.emplace_back(name);
  return out;
}

void SceneNetRegistry::RequireScenes(
    const std::vector<SceneLabel>& retained) const {
  for (const auto& scene : retained) {
    if (!Find(scene)) {
      throw ValidationError("registry has no source for retained scene \"" +
                            scene.name() + "\"");
    }
  }
}

SceneNetRegistry SceneNetRegistry::Load(const std::filesystem::path& path,
                                        const Dataset& dataset) {
  const std::string where = path.string();
  const Json root = internal::ParseJsonFile(path);
  const std::filesystem::path base = path.parent_path();
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  SceneNetRegistry registry;
  const Json& entries =
      internal::GetObject(internal::Field(root, "entries", where), where);
  for (const auto& [scene, file] : entries.items()) {
    if (scene.empty()) throw ValidationError(where + ": empty scene name");
    const SceneLabel label(scene);
    if (!dataset.SceneIndex(label)) {
      throw ValidationError(where + ": unknown scene \"" + scene + "\"");
    }
    registry.Register(label, RecordDetectionSource::FromFile(
                                 resolve(internal::GetString(file, where)),
                                 dataset));
  }
  if (internal::HasField(root, "fallback") && !root["fallback"].is_null()) {
    registry.SetFallback(RecordDetectionSource::FromFile(
        resolve(internal::GetString(root["fallback"], where + " fallback")),
        dataset));
  }
  return registry;
}

RouteResult Route(const ImageRecord& image, const ScenePrediction& scene_pred,
                  const SceneNetRegistry& registry,
                  const RouteOptions& options) {
  RouteResult result;
  const DetectionSource* source = registry.Find(scene_pred.scene);
  if (source) {
    result.decision = RouteDecision::kScene;
    result.source = scene_pred.scene.name();
  } else if (options.missing_scene == MissingScenePolicy::kError) {
    throw ValidationError("image \"" + image.image_id +
                          "\" predicted scene \"" + scene_pred.scene.name() +
                          "\" has no registered source");
  } else if (registry.fallback()) {
    source = registry.fallback();
    result.decision = RouteDecision::kFallback;
    result.source = std::string(kFallbackSourceName);
  } else {
    result.decision = RouteDecision::kDropped;
    return result;
  }
  result.source_missing_image = !source->Covers(image.image_id);
  result.records = source->Detect(image);
  if (options.tag_source) {
    for (auto& rec : result.records) rec.source = result.source;
  }
  return result;
}

MnfResult RunMnf(const Dataset& dataset, const SceneProvider& provider,
                 const SceneNetRegistry& registry,
                 const RouteOptions& options) {
  std::vector<const ImageRecord*> test_images;
  for (const auto& image : dataset.images()) {
    if (image.split == Split::kTest) test_images.push_back(&image);
  }
  std::vector<RouteResult> routed(test_images.size());
  ParallelFor(test_images.size(), [&](std::size_t i) {
    routed[i] = Route(*test_images[i], provider.Identify(*test_images[i]),
                      registry, options);
  });

  MnfResult result;
  for (std::size_t i = 0; i < routed.size(); ++i) {
    RouteResult& r = routed[i];
    switch (r.decision) {
      case RouteDecision::kScene:
        ++result.images_per_source[r.source];
        break;
      case RouteDecision::kFallback:
        ++result.images_per_source[r.source];
        ++result.fallback_images;
        break;
      case RouteDecision::kDropped:
        ++result.dropped_images;
        result.warnings.push_back("image \"" + test_images[i]->image_id +
                                  "\": no source for predicted scene; "
                                  "emitting no detections");
        break;
    }
    if (r.source_missing_image) {
      result.warnings.push_back("image \"" + test_images[i]->image_id +
                                "\": source \"" + r.source +
                                "\" has no detections for it");
    }
    for (auto& rec : r.records) result.records.push_back(std::move(rec));
  }
  return result;
}

std::string SerializeMnfSummary(const MnfResult& result) {
  Json root = Json::object();
  root["detections"] = result.records.size();
  Json per_source = Json::object();
  for (const auto& [name, count] : result.images_per_source) {
    per_source[name] = count;
  }
  root["images_per_source"] = std::move(per_source);
  root["fallback_images"] = result.fallback_images;
  root["dropped_images"] = result.dropped_images;
  root["warnings"] = result.warnings;
  return internal::DumpJson(root);
}

}  // namespace ctxfuse
