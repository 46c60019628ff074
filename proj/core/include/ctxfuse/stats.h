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

// Object-scene co-occurrence statistics.
//
// All probabilities are ratios of integer counts over ground-truth
// annotations. Every detection inherits the scene of its image, so
//
//   P(o)   = #detections labelled o / m
//   P(s)   = #images labelled s / n
//   P(o|s) = #detections labelled o in scene-s images / #detections in s
//
// The table stores the counts and derives the probabilities, which keeps
// persistence exact and lets SCU apply Laplace smoothing at query time.

#ifndef CTXFUSE_STATS_H_
#define CTXFUSE_STATS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxfuse/types.h"

namespace ctxfuse {

using Count = std::uint64_t;

class CooccurrenceTable {
 public:
  CooccurrenceTable() = default;

  // pair_counts is indexed [object][scene]. m is the row-sum total and n the
  // sum of scene_image_counts.
  static CooccurrenceTable FromCounts(
      std::vector<ObjectLabel> objects, std::vector<SceneLabel> scenes,
      std::vector<std::vector<Count>> pair_counts,
      std::vector<Count> scene_image_counts);

  // Full form used when marginals must survive a column filter: object_counts
  // and m/n are taken as given instead of re-derived from the columns.
  static CooccurrenceTable FromCounts(
      std::vector<ObjectLabel> objects, std::vector<SceneLabel> scenes,
      std::vector<std::vector<Count>> pair_counts,
      std::vector<Count> object_counts, std::vector<Count> scene_image_counts,
      Count detection_count, Count image_count);

  const std::vector<ObjectLabel>& objects() const { return objects_; }
  const std::vector<SceneLabel>& scenes() const { return scenes_; }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t scene_count() const { return scenes_.size(); }

  std::optional<std::size_t> ObjectIndex(const ObjectLabel& label) const;
  std::optional<std::size_t> SceneIndex(const SceneLabel& label) const;

  // P(o|s); 0 for scenes without detections.
  double cond(std::size_t object, std::size_t scene) const;
  // (count + lambda) / (total + lambda * |O|); equals cond() for lambda = 0.
  double SmoothedCond(std::size_t object, std::size_t scene,
                      double lambda) const;
  double object_prior(std::size_t object) const;
  double scene_prior(std::size_t scene) const;

  Count pair_count(std::size_t object, std::size_t scene) const {
    return pair_counts_[object][scene];
  }
  Count object_detection_count(std::size_t object) const {
    return object_counts_[object];
  }
  Count per_scene_detection_count(std::size_t scene) const {
    return per_scene_detections_[scene];
  }
  Count scene_image_count(std::size_t scene) const {
    return scene_images_[scene];
  }
  Count detection_count() const { return m_; }  // m
  Count image_count() const { return n_; }      // n

  friend bool operator==(const CooccurrenceTable& a,
                         const CooccurrenceTable& b) {
    return a.objects_ == b.objects_ && a.scenes_ == b.scenes_ &&
           a.pair_counts_ == b.pair_counts_ &&
           a.object_counts_ == b.object_counts_ &&
           a.scene_images_ == b.scene_images_ && a.m_ == b.m_ && a.n_ == b.n_;
  }

 private:
  std::vector<ObjectLabel> objects_;
  std::vector<SceneLabel> scenes_;
  std::vector<std::vector<Count>> pair_counts_;
  std::vector<Count> object_counts_;
  std::vector<Count> scene_images_;
  std::vector<Count> per_scene_detections_;
  Count m_ = 0;
  Count n_ = 0;
  std::unordered_map<std::string, std::size_t> object_index_;
  std::unordered_map<std::string, std::size_t> scene_index_;
};

// Counts over the images picked by `split`. Scenes without detections keep
// an all-zero column. An empty selection yields a zero-count table.
CooccurrenceTable ComputeTable(const Dataset& dataset, SplitSelector split);

inline constexpr int kDefaultAlpha = 5;

struct SceneFilterResult {
  CooccurrenceTable table;
  std::vector<SceneLabel> retained;
  std::vector<SceneLabel> excluded;
};

// Drops scenes with fewer than `alpha` training images. The remaining
// columns and both marginals are left exactly as counted. Throws
// ValidationError if alpha < 1 or no scene survives.
SceneFilterResult FilterScenes(const CooccurrenceTable& table,
                               const Dataset& dataset, int alpha);

// Per-object scene likelihood P(s|o) and its argmax, used to group confusion
// matrix rows by the scene each object most often appears in.
struct SceneClusterKey {
  std::vector<ObjectLabel> objects;
  std::vector<SceneLabel> scenes;
  std::vector<std::vector<double>> likelihoods;  // [object][scene]
  std::vector<std::optional<std::size_t>> assignment;  // scene index or none

  // Object indices grouped by assigned scene (scene order), dataset order
  // inside each group, unassigned objects last.
  std::vector<std::size_t> ObjectOrder() const;
};

SceneClusterKey ComputeClusterKey(const Dataset& dataset, SplitSelector split);

// {"objects", "scenes", "counts": {"n", "m", "per_scene"}, "cond",
//  "object_prior", "scene_prior"}
std::string SerializeTable(const CooccurrenceTable& table);
CooccurrenceTable ParseTable(std::string_view json_text,
                             std::string_view origin = "<memory>");
void SaveTable(const CooccurrenceTable& table,
               const std::filesystem::path& path);
CooccurrenceTable LoadTable(const std::filesystem::path& path);

// object,<scene1>,...; one row per object, P(o|s) with 3 decimals.
std::string TableToCsv(const CooccurrenceTable& table);

std::string SerializeClusterKey(const SceneClusterKey& key);

}  // namespace ctxfuse

#endif  // CTXFUSE_STATS_H_
