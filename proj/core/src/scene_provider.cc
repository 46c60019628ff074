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

#include "ctxfuse/scene_provider.h"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "json_util.h"

namespace ctxfuse {
namespace {

using internal::Json;

std::vector<ScenePrediction> PredictionsFromJson(
    const Json& root, const std::unordered_set<std::string>& scenes,
    std::string_view origin) {
  const std::string where(origin);
  const Json& arr =
      internal::GetArray(internal::Field(root, "predictions", where), where);
  std::vector<ScenePrediction> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = where + " predictions[" + std::to_string(i) + "]";
    ScenePrediction p;
    p.image_id = internal::GetString(internal::Field(arr[i], "image_id", ctx),
                                     ctx + ".image_id");
    const std::string scene = internal::GetString(
        internal::Field(arr[i], "scene", ctx), ctx + ".scene");
    if (!scenes.contains(scene)) {
      throw ValidationError(ctx + ": unknown scene \"" + scene + "\"");
    }
    p.scene = SceneLabel(scene);
    p.confidence = internal::GetNumber(
        internal::Field(arr[i], "confidence", ctx), ctx + ".confidence");
    if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
      throw ValidationError(ctx + ": confidence outside [0, 1]");
    }
    if (!seen.insert(p.image_id).second) {
      throw ValidationError(ctx + ": duplicate prediction for \"" +
                            p.image_id + "\"");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::unordered_set<std::string> SceneNames(std::span<const SceneLabel> scenes) {
  std::unordered_set<std::string> names;
  for (const auto& s : scenes) names.insert(s.name());
  return names;
}

}  // namespace

std::string_view SceneModeName(SceneMode mode) {
  switch (mode) {
    case SceneMode::kGroundTruth:
      return "ground_truth";
    case SceneMode::kFile:
      return "file";
    case SceneMode::kHistogram:
      return "histogram";
  }
  return "ground_truth";
}

SceneMode ParseSceneMode(std::string_view text) {
  if (text == "ground_truth") return SceneMode::kGroundTruth;
  if (text == "file") return SceneMode::kFile;
  if (text == "histogram") return SceneMode::kHistogram;
  throw ValidationError("unknown scene mode \"" + std::string(text) + "\"");
}

std::vector<ScenePrediction> ParseScenePredictions(std::string_view json_text,
                                                   const Dataset& dataset,
                                                   std::string_view origin) {
  auto preds =
      PredictionsFromJson(internal::ParseJsonText(json_text, origin),
                          SceneNames(dataset.scene_classes()), origin);
  for (const auto& p : preds) {
    if (!dataset.FindImage(p.image_id)) {
      throw ValidationError(std::string(origin) + ": prediction for unknown " +
                            "image_id \"" + p.image_id + "\"");
    }
  }
  return preds;
}

std::vector<ScenePrediction> LoadScenePredictions(
    const std::filesystem::path& path, const Dataset& dataset) {
  return ParseScenePredictions(ReadTextFile(path), dataset, path.string());
}

std::vector<ScenePrediction> LoadScenePredictions(
    const std::filesystem::path& path, std::span<const SceneLabel> scenes) {
  return PredictionsFromJson(internal::ParseJsonFile(path), SceneNames(scenes),
                             path.string());
}

std::string SerializeScenePredictions(
    std::span<const ScenePrediction> predictions) {
  Json arr = Json::array();
  for (const auto& p : predictions) {
    Json item = Json::object();
    item["image_id"] = p.image_id;
    item["scene"] = p.scene.name();
    item["confidence"] = internal::Number(p.confidence);
    arr.push_back(std::move(item));
  }
  Json root = Json::object();
  root["predictions"] = std::move(arr);
  return internal::DumpJson(root);
}

void SaveScenePredictions(std::span<const ScenePrediction> predictions,
                          const std::filesystem::path& path) {
  WriteTextFile(path, SerializeScenePredictions(predictions));
}

std::filesystem::path ResolveImagePath(
    const ImageRecord& image, const std::filesystem::path& image_root) {
  if (!image.source_path) {
    throw ValidationError("image \"" + image.image_id +
                          "\" has no source_path");
  }
  std::filesystem::path p(*image.source_path);
  return p.is_absolute() || image_root.empty() ? p : image_root / p;
}

std::vector<double> HistogramClassifier::Histogram(const RgbImage& image,
                                                   int bins) {
  if (bins < 1) throw ValidationError("histogram bins must be >= 1");
  const std::size_t b = static_cast<std::size_t>(bins);
  std::vector<double> hist(b * b * b, 0.0);
  const std::size_t pixels = image.width * image.height;
  if (pixels == 0) throw ValidationError("cannot histogram an empty image");
  const auto bin = [b](std::uint8_t v) { return v * b / 256; };
  for (std::size_t i = 0; i < pixels; ++i) {
    const std::uint8_t* px = &image.pixels[3 * i];
    hist[(bin(px[0]) * b + bin(px[1])) * b + bin(px[2])] += 1.0;
  }
  for (double& v : hist) v /= static_cast<double>(pixels);
  return hist;
}

HistogramClassifier HistogramClassifier::Fit(
    const Dataset& dataset, SplitSelector split, int bins,
    const std::filesystem::path& image_root) {
  if (bins < 1) throw ValidationError("histogram bins must be >= 1");
  const std::size_t dims =
      static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins) *
      static_cast<std::size_t>(bins);
  std::vector<std::vector<double>> sums(dataset.scene_classes().size(),
                                        std::vector<double>(dims, 0.0));
  std::vector<std::size_t> counts(dataset.scene_classes().size(), 0);
  for (const auto& image : dataset.images()) {
    if (!Selects(split, image.split)) continue;
    const auto hist =
        Histogram(ReadPpm(ResolveImagePath(image, image_root)), bins);
    const std::size_t s = *dataset.SceneIndex(image.scene);
    for (std::size_t d = 0; d < dims; ++d) sums[s][d] += hist[d];
    ++counts[s];
  }
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] == 0) {
      throw ValidationError("scene \"" + dataset.scene_classes()[s].name() +
                            "\" has no training images for the classifier");
    }
    for (double& v : sums[s]) v /= static_cast<double>(counts[s]);
  }
  return FromCentroids(bins, dataset.scene_classes(), std::move(sums));
}

HistogramClassifier HistogramClassifier::FromCentroids(
    int bins, std::vector<SceneLabel> scenes,
    std::vector<std::vector<double>> centroids) {
  if (bins < 1) throw ValidationError("histogram bins must be >= 1");
  if (scenes.size() != centroids.size() || scenes.empty()) {
    throw ValidationError("classifier needs one centroid per scene");
  }
  const std::size_t dims =
      static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins) *
      static_cast<std::size_t>(bins);
  for (const auto& c : centroids) {
    if (c.size() != dims) {
      throw ValidationError("centroid dimension does not match bins^3");
    }
  }
  HistogramClassifier h;
  h.bins_ = bins;
  h.scenes_ = std::move(scenes);
  h.centroids_ = std::move(centroids);
  return h;
}

std::pair<std::size_t, double> HistogramClassifier::Classify(
    const RgbImage& image) const {
  if (!fitted()) throw Error("histogram classifier is not fitted");
  const auto hist = Histogram(image, bins_);
  std::vector<double> dist(centroids_.size());
  std::size_t best = 0;
  for (std::size_t s = 0; s < centroids_.size(); ++s) {
    double sq = 0;
    for (std::size_t d = 0; d < hist.size(); ++d) {
      const double diff = hist[d] - centroids_[s][d];
      sq += diff * diff;
    }
    dist[s] = std::sqrt(sq);
    if (dist[s] < dist[best]) best = s;
  }
  // Softmin, shifted by the minimum for numerical stability.
  double z = 0;
  for (double d : dist) z += std::exp(dist[best] - d);
  return {best, 1.0 / z};
}

std::string HistogramClassifier::Serialize() const {
  Json root = Json::object();
  root["bins"] = bins_;
  Json scenes = Json::array();
  for (const auto& s : scenes_) scenes.push_back(s.name());
  root["scenes"] = std::move(scenes);
  Json cents = Json::array();
  for (const auto& c : centroids_) {
    Json row = Json::array();
    for (double v : c) row.push_back(internal::Number(v));
    cents.push_back(std::move(row));
  }
  root["centroids"] = std::move(cents);
  return internal::DumpJson(root);
}

HistogramClassifier HistogramClassifier::Parse(std::string_view json_text,
                                               std::string_view origin) {
  const std::string where(origin);
  const Json root = internal::ParseJsonText(json_text, origin);
  const auto bins = internal::GetInteger(internal::Field(root, "bins", where),
                                         where + " bins");
  if (bins < 1 || bins > 64) throw ValidationError(where + ": bad bins");
  std::vector<SceneLabel> scenes;
  for (auto& name : internal::GetStringArray(
           internal::Field(root, "scenes", where), where + " scenes")) {
    if (name.empty()) throw ValidationError(where + ": empty scene label");
    scenes.emplace_back(std::move(name));
  }
  std::vector<std::vector<double>> cents;
  for (const auto& row : internal::GetArray(
           internal::Field(root, "centroids", where), where + " centroids")) {
    cents.push_back(internal::GetNumberArray(row, where + " centroids"));
  }
  return FromCentroids(static_cast<int>(bins), std::move(scenes),
                       std::move(cents));
}

void HistogramClassifier::Save(const std::filesystem::path& path) const {
  WriteTextFile(path, Serialize());
}

HistogramClassifier HistogramClassifier::Load(
    const std::filesystem::path& path) {
  return Parse(ReadTextFile(path), path.string());
}

SceneProvider SceneProvider::GroundTruth() { return SceneProvider(); }

SceneProvider SceneProvider::FromPredictions(
    std::vector<ScenePrediction> predictions, const Dataset& dataset) {
  SceneProvider p;
  p.mode_ = SceneMode::kFile;
  for (auto& pred : predictions) {
    if (!dataset.SceneIndex(pred.scene)) {
      throw ValidationError("prediction for \"" + pred.image_id +
                            "\" uses unknown scene \"" + pred.scene.name() +
                            "\"");
    }
    std::string id = pred.image_id;
    p.predictions_.insert_or_assign(std::move(id), std::move(pred));
  }
  return p;
}

SceneProvider SceneProvider::FromClassifier(HistogramClassifier classifier,
                                            const Dataset& dataset,
                                            std::filesystem::path image_root) {
  for (const auto& s : classifier.scenes()) {
    if (!dataset.SceneIndex(s)) {
      throw ValidationError("classifier scene \"" + s.name() +
                            "\" is not a dataset scene");
    }
  }
  SceneProvider p;
  p.mode_ = SceneMode::kHistogram;
  p.classifier_ = std::move(classifier);
  p.image_root_ = std::move(image_root);
  return p;
}

SceneProvider SceneProvider::Create(const SceneProviderConfig& config,
                                    const Dataset& dataset) {
  switch (config.mode) {
    case SceneMode::kGroundTruth:
      return GroundTruth();
    case SceneMode::kFile:
      if (!config.file_path) {
        throw ValidationError("file scene mode requires a prediction file");
      }
      return FromPredictions(LoadScenePredictions(*config.file_path, dataset),
                             dataset);
    case SceneMode::kHistogram:
      if (!config.file_path) {
        throw ValidationError(
            "histogram scene mode requires a fitted classifier file");
      }
      return FromClassifier(HistogramClassifier::Load(*config.file_path),
                            dataset, config.image_root);
  }
  return GroundTruth();
}

ScenePrediction SceneProvider::Identify(const ImageRecord& image) const {
  switch (mode_) {
    case SceneMode::kGroundTruth:
      return ScenePrediction{image.image_id, image.scene, 1.0};
    case SceneMode::kFile: {
      auto it = predictions_.find(image.image_id);
      if (it == predictions_.end()) {
        throw ValidationError("no scene prediction for image \"" +
                              image.image_id + "\"");
      }
      return it->second;
    }
    case SceneMode::kHistogram: {
      const auto [scene, confidence] =
          classifier_.Classify(ReadPpm(ResolveImagePath(image, image_root_)));
      return ScenePrediction{image.image_id, classifier_.scenes()[scene],
                             confidence};
    }
  }
  return ScenePrediction{image.image_id, image.scene, 1.0};
}

}  // namespace ctxfuse
