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

// Shared domain types: labels, boxes, images, detections and datasets.

#ifndef CTXFUSE_TYPES_H_
#define CTXFUSE_TYPES_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctxfuse {

struct ObjectKind {};
struct SceneKind {};

// A class name of a fixed kind. Comparison is exact and case-sensitive;
// the kind is carried by the type so object and scene labels never mix.
template <typename Kind>
class Label {
 public:
  Label() = default;
  explicit Label(std::string name);

  const std::string& name() const { return name_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return a.name_.compare(b.name_) <=> 0;
  }

 private:
  std::string name_;
};

using ObjectLabel = Label<ObjectKind>;
using SceneLabel = Label<SceneKind>;

extern template class Label<ObjectKind>;
extern template class Label<SceneKind>;

// Axis-aligned box in pixels, top-left origin: [x, y, w, h].
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 1;
  double h = 1;

  double area() const { return w * h; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
  friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

// Throws ValidationError unless x, y >= 0 and w, h > 0 (all finite).
void ValidateBox(const BoundingBox& box, std::string_view context);

// Intersection over union; 0 for disjoint boxes.
double Iou(const BoundingBox& a, const BoundingBox& b);

struct GroundTruthObject {
  ObjectLabel label;
  BoundingBox box;
  friend bool operator==(const GroundTruthObject&,
                         const GroundTruthObject&) = default;
};

enum class Split { kTrain, kTest };

// Which images an operation reads.
enum class SplitSelector { kTrain, kTest, kAll };

std::string_view SplitName(Split split);
std::string_view SplitSelectorName(SplitSelector selector);
Split ParseSplit(std::string_view text);
SplitSelector ParseSplitSelector(std::string_view text);
bool Selects(SplitSelector selector, Split split);

struct ImageRecord {
  std::string image_id;
  SceneLabel scene;
  Split split = Split::kTrain;
  std::vector<GroundTruthObject> objects;
  std::optional<std::string> source_path;
  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Candidate {
  ObjectLabel label;
  double score = 0;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// One predicted box. Candidates are non-empty, unique by label and sorted
// by descending score with ascending label breaking ties.
struct DetectionRecord {
  std::string image_id;
  BoundingBox box;
  std::vector<Candidate> candidates;
  std::optional<std::string> source;

  const Candidate& top() const { return candidates.front(); }
  friend bool operator==(const DetectionRecord&,
                         const DetectionRecord&) = default;
};

// Sorts candidates into canonical order (descending score, ascending label).
void SortCandidates(std::vector<Candidate>& candidates);

// An annotated collection of images with fixed object and scene vocabularies.
// Instances are only produced through Create(), which enforces referential
// integrity; they are immutable afterwards.
class Dataset {
 public:
  Dataset() = default;

  // Throws ValidationError naming the first offending record.
  static Dataset Create(std::vector<ObjectLabel> object_classes,
                        std::vector<SceneLabel> scene_classes,
                        std::vector<ImageRecord> images);

  const std::vector<ObjectLabel>& object_classes() const {
    return object_classes_;
  }
  const std::vector<SceneLabel>& scene_classes() const {
    return scene_classes_;
  }
  const std::vector<ImageRecord>& images() const { return images_; }

  std::optional<std::size_t> ObjectIndex(const ObjectLabel& label) const;
  std::optional<std::size_t> SceneIndex(const SceneLabel& label) const;
  const ImageRecord* FindImage(std::string_view image_id) const;

  // n: number of images in the selection.
  std::size_t ImageCount(SplitSelector selector) const;
  // m: number of ground-truth objects in the selection.
  std::size_t DetectionCount(SplitSelector selector) const;

  // A dataset with the same vocabularies restricted to `keep` images.
  Dataset Subset(const std::function<bool(const ImageRecord&)>& keep) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.object_classes_ == b.object_classes_ &&
           a.scene_classes_ == b.scene_classes_ && a.images_ == b.images_;
  }

 private:
  std::vector<ObjectLabel> object_classes_;
  std::vector<SceneLabel> scene_classes_;
  std::vector<ImageRecord> images_;
  std::unordered_map<std::string, std::size_t> object_index_;
  std::unordered_map<std::string, std::size_t> scene_index_;
  std::unordered_map<std::string, std::size_t> image_index_;
};

}  // namespace ctxfuse

#endif  // CTXFUSE_TYPES_H_
