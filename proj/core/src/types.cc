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

#include "ctxfuse/types.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "ctxfuse/errors.h"

namespace ctxfuse {

template <typename Kind>
Label<Kind>::Label(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw ValidationError("label name must be non-empty");
}

template class Label<ObjectKind>;
template class Label<SceneKind>;

void ValidateBox(const BoundingBox& box, std::string_view context) {
  const bool finite = std::isfinite(box.x) && std::isfinite(box.y) &&
                      std::isfinite(box.w) && std::isfinite(box.h);
  if (!finite || box.x < 0 || box.y < 0) {
    throw ValidationError(std::string(context) +
                          ": bbox origin must be finite and non-negative");
  }
  if (!(box.w > 0) || !(box.h > 0)) {
    throw ValidationError(std::string(context) +
                          ": bbox has non-positive extent");
  }
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0 || iy <= 0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

std::string_view SplitSelectorName(SplitSelector selector) {
  switch (selector) {
    case SplitSelector::kTrain:
      return "train";
    case SplitSelector::kTest:
      return "test";
    case SplitSelector::kAll:
      return "all";
  }
  return "all";
}

Split ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  throw ValidationError("unknown split \"" + std::string(text) +
                        "\" (expected train or test)");
}

SplitSelector ParseSplitSelector(std::string_view text) {
  if (text == "all") return SplitSelector::kAll;
  return ParseSplit(text) == Split::kTrain ? SplitSelector::kTrain
                                           : SplitSelector::kTest;
}

bool Selects(SplitSelector selector, Split split) {
  switch (selector) {
    case SplitSelector::kTrain:
      return split == Split::kTrain;
    case SplitSelector::kTest:
      return split == Split::kTest;
    case SplitSelector::kAll:
      return true;
  }
  return false;
}

void SortCandidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.label < b.label;
            });
}

Dataset Dataset::Create(std::vector<ObjectLabel> object_classes,
                        std::vector<SceneLabel> scene_classes,
                        std::vector<ImageRecord> images) {
  Dataset d;
  for (std::size_t i = 0; i < object_classes.size(); ++i) {
    if (!d.object_index_.emplace(object_classes[i].name(), i).second) {
      throw ValidationError("duplicate object class \"" +
                            object_classes[i].name() + "\"");
    }
  }
  for (std::size_t i = 0; i < scene_classes.size(); ++i) {
    if (!d.scene_index_.emplace(scene_classes[i].name(), i).second) {
      throw ValidationError("duplicate scene class \"" +
                            scene_classes[i].name() + "\"");
    }
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImageRecord& image = images[i];
    if (image.image_id.empty()) {
      throw ValidationError("image #" + std::to_string(i) +
                            " has an empty image_id");
    }
    if (!d.image_index_.emplace(image.image_id, i).second) {
      throw ValidationError("duplicate image_id \"" + image.image_id + "\"");
    }
    if (!d.scene_index_.contains(image.scene.name())) {
      throw ValidationError("image \"" + image.image_id +
                            "\" references unknown scene \"" +
                            image.scene.name() + "\"");
    }
    for (std::size_t k = 0; k < image.objects.size(); ++k) {
      const GroundTruthObject& obj = image.objects[k];
      if (!d.object_index_.contains(obj.label.name())) {
        throw ValidationError("image \"" + image.image_id +
                              "\" references unknown object \"" +
                              obj.label.name() + "\"");
      }
      ValidateBox(obj.box, "image \"" + image.image_id + "\" object #" +
                               std::to_string(k));
    }
  }
  d.object_classes_ = std::move(object_classes);
  d.scene_classes_ = std::move(scene_classes);
  d.images_ = std::move(images);
  return d;
}

std::optional<std::size_t> Dataset::ObjectIndex(
    const ObjectLabel& label) const {
  auto it = object_index_.find(label.name());
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::SceneIndex(const SceneLabel& label) const {
  auto it = scene_index_.find(label.name());
  if (it == scene_index_.end()) return std::nullopt;
  return it->second;
}

const ImageRecord* Dataset::FindImage(std::string_view image_id) const {
  auto it = image_index_.find(std::string(image_id));
  return it == image_index_.end() ? nullptr : &images_[it->second];
}

std::size_t Dataset::ImageCount(SplitSelector selector) const {
  return static_cast<std::size_t>(
      std::count_if(images_.begin(), images_.end(), [&](const auto& image) {
        return Selects(selector, image.split);
      }));
}

std::size_t Dataset::DetectionCount(SplitSelector selector) const {
  std::size_t m = 0;
  for (const auto& image : images_) {
    if (Selects(selector, image.split)) m += image.objects.size();
  }
  return m;
}

Dataset Dataset::Subset(
    const std::function<bool(const ImageRecord&)>& keep) const {
  std::vector<ImageRecord> kept;
  for (const auto& image : images_) {
    if (keep(image)) kept.push_back(image);
  }
  return Create(object_classes_, scene_classes_, std::move(kept));
}

}  // namespace ctxfuse
