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

#include <unordered_set>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "json_util.h"

namespace ctxfuse {
namespace {

using internal::Json;

BoundingBox ParseBox(const Json& value, const std::string& context) {
  const std::vector<double> v = internal::GetNumberArray(value, context);
  if (v.size() != 4) {
    throw ParseError(context + ": bbox must have 4 numbers [x, y, w, h]");
  }
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

Json BoxJson(const BoundingBox& box) {
  return Json::array({internal::Number(box.x), internal::Number(box.y),
                      internal::Number(box.w), internal::Number(box.h)});
}

template <typename L>
std::vector<L> ParseLabels(const Json& value, const std::string& context) {
  std::vector<L> labels;
  for (auto& name : internal::GetStringArray(value, context)) {
    if (name.empty()) throw ValidationError(context + ": empty label name");
    labels.emplace_back(std::move(name));
  }
  return labels;
}

Dataset DatasetFromJson(const Json& root, std::string_view origin) {
  const std::string where(origin);
  auto objects = ParseLabels<ObjectLabel>(
      internal::Field(root, "object_classes", where), where + " object_classes");
  auto scenes = ParseLabels<SceneLabel>(
      internal::Field(root, "scene_classes", where), where + " scene_classes");

  std::vector<ImageRecord> images;
  const Json& arr =
      internal::GetArray(internal::Field(root, "images", where), where);
  images.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& item = arr[i];
    const std::string ctx = where + " images[" + std::to_string(i) + "]";
    ImageRecord image;
    image.image_id = internal::GetString(internal::Field(item, "image_id", ctx),
                                         ctx + ".image_id");
    const std::string scene = internal::GetString(
        internal::Field(item, "scene", ctx), ctx + ".scene");
    if (scene.empty()) throw ValidationError(ctx + ": empty scene label");
    image.scene = SceneLabel(scene);
    image.split = ParseSplit(internal::GetString(
        internal::Field(item, "split", ctx), ctx + ".split"));
    if (internal::HasField(item, "source_path")) {
      image.source_path =
          internal::GetString(item["source_path"], ctx + ".source_path");
    }
    const Json& objs =
        internal::GetArray(internal::Field(item, "objects", ctx), ctx);
    for (std::size_t k = 0; k < objs.size(); ++k) {
      const std::string octx = ctx + ".objects[" + std::to_string(k) + "]";
      const std::string label = internal::GetString(
          internal::Field(objs[k], "label", octx), octx + ".label");
      if (label.empty()) throw ValidationError(octx + ": empty object label");
      image.objects.push_back(GroundTruthObject{
          ObjectLabel(label),
          ParseBox(internal::Field(objs[k], "bbox", octx), octx + ".bbox")});
    }
    images.push_back(std::move(image));
  }
  return Dataset::Create(std::move(objects), std::move(scenes),
                         std::move(images));
}

// Label/image lookup used while validating a detections file.
struct DetectionChecker {
  std::unordered_set<std::string> objects;
  const Dataset* dataset = nullptr;
};

std::vector<DetectionRecord> DetectionsFromJson(const Json& root,
                                                const DetectionChecker& check,
                                                std::string_view origin) {
  const std::string where(origin);
  const Json& arr =
      internal::GetArray(internal::Field(root, "detections", where), where);
  std::vector<DetectionRecord> records;
  records.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& item = arr[i];
    const std::string ctx = where + " detections[" + std::to_string(i) + "]";
    DetectionRecord rec;
    rec.image_id = internal::GetString(internal::Field(item, "image_id", ctx),
                                       ctx + ".image_id");
    if (check.dataset && !check.dataset->FindImage(rec.image_id)) {
      throw ValidationError(ctx + ": unknown image_id \"" + rec.image_id +
                            "\"");
    }
    rec.box = ParseBox(internal::Field(item, "bbox", ctx), ctx + ".bbox");
    ValidateBox(rec.box, ctx);
    if (internal::HasField(item, "source")) {
      rec.source = internal::GetString(item["source"], ctx + ".source");
    }
    const Json& cands =
        internal::GetArray(internal::Field(item, "candidates", ctx), ctx);
    if (cands.empty()) throw ValidationError(ctx + ": empty candidate list");
    std::unordered_set<std::string> seen;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const std::string cctx = ctx + ".candidates[" + std::to_string(k) + "]";
      const std::string label = internal::GetString(
          internal::Field(cands[k], "label", cctx), cctx + ".label");
      if (!check.objects.contains(label)) {
        throw ValidationError(cctx + ": unknown candidate label \"" + label +
                              "\"");
      }
      if (!seen.insert(label).second) {
        throw ValidationError(cctx + ": duplicate candidate \"" + label +
                              "\"");
      }
      const double score = internal::GetNumber(
          internal::Field(cands[k], "score", cctx), cctx + ".score");
      if (!(score >= 0.0 && score <= 1.0)) {
        throw ValidationError(cctx + ": score outside [0, 1]");
      }
      rec.candidates.push_back(Candidate{ObjectLabel(label), score});
    }
    SortCandidates(rec.candidates);
    records.push_back(std::move(rec));
  }
  return records;
}

DetectionChecker CheckerFor(const Dataset& dataset) {
  DetectionChecker c;
  for (const auto& o : dataset.object_classes()) c.objects.insert(o.name());
  c.dataset = &dataset;
  return c;
}

DetectionChecker CheckerFor(std::span<const ObjectLabel> objects) {
  DetectionChecker c;
  for (const auto& o : objects) c.objects.insert(o.name());
  return c;
}

}  // namespace

Dataset ParseManifest(std::string_view json_text, std::string_view origin) {
  return DatasetFromJson(internal::ParseJsonText(json_text, origin), origin);
}

Dataset LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadTextFile(path), path.string());
}

std::string SerializeManifest(const Dataset& dataset) {
  Json root = Json::object();
  Json objects = Json::array();
  for (const auto& o : dataset.object_classes()) objects.push_back(o.name());
  Json scenes = Json::array();
  for (const auto& s : dataset.scene_classes()) scenes.push_back(s.name());
  root["object_classes"] = std::move(objects);
  root["scene_classes"] = std::move(scenes);
  Json images = Json::array();
  for (const auto& image : dataset.images()) {
    Json item = Json::object();
    item["image_id"] = image.image_id;
    item["scene"] = image.scene.name();
    item["split"] = std::string(SplitName(image.split));
    if (image.source_path) item["source_path"] = *image.source_path;
    Json objs = Json::array();
    for (const auto& obj : image.objects) {
      Json o = Json::object();
      o["label"] = obj.label.name();
      o["bbox"] = BoxJson(obj.box);
      objs.push_back(std::move(o));
    }
    item["objects"] = std::move(objs);
    images.push_back(std::move(item));
  }
  root["images"] = std::move(images);
  return internal::DumpJson(root);
}

void SaveManifest(const Dataset& dataset, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeManifest(dataset));
}

std::vector<DetectionRecord> ParseDetections(std::string_view json_text,
                                             const Dataset& dataset,
                                             std::string_view origin) {
  return DetectionsFromJson(internal::ParseJsonText(json_text, origin),
                            CheckerFor(dataset), origin);
}

std::vector<DetectionRecord> ParseDetections(
    std::string_view json_text, std::span<const ObjectLabel> objects,
    std::string_view origin) {
  return DetectionsFromJson(internal::ParseJsonText(json_text, origin),
                            CheckerFor(objects), origin);
}

std::vector<DetectionRecord> LoadDetections(const std::filesystem::path& path,
                                            const Dataset& dataset) {
  return ParseDetections(ReadTextFile(path), dataset, path.string());
}

std::vector<DetectionRecord> LoadDetections(
    const std::filesystem::path& path, std::span<const ObjectLabel> objects) {
  return ParseDetections(ReadTextFile(path), objects, path.string());
}

std::string SerializeDetections(std::span<const DetectionRecord> records) {
  Json arr = Json::array();
  for (const auto& rec : records) {
    Json item = Json::object();
    item["image_id"] = rec.image_id;
    item["bbox"] = BoxJson(rec.box);
    if (rec.source) item["source"] = *rec.source;
    Json cands = Json::array();
    for (const auto& c : rec.candidates) {
      Json cj = Json::object();
      cj["label"] = c.label.name();
      cj["score"] = internal::Number(c.score);
      cands.push_back(std::move(cj));
    }
    item["candidates"] = std::move(cands);
    arr.push_back(std::move(item));
  }
  Json root = Json::object();
  root["detections"] = std::move(arr);
  return internal::DumpJson(root);
}

void SaveDetections(std::span<const DetectionRecord> records,
                    const std::filesystem::path& path) {
  WriteTextFile(path, SerializeDetections(records));
}

}  // namespace ctxfuse
