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

// Scene-context rescoring of detector candidates.
//
// For one box with candidate scores P(o|bb) in an image whose scene is s,
// the final label is
//
//   argmax_{o in candidates} P(o|bb) * P(o|s)
//
// where P(o|s) comes from the co-occurrence table. Candidates below the
// score floor are dropped first; classes missing from the candidate list
// score zero and therefore never win.

#ifndef CTXFUSE_SCU_H_
#define CTXFUSE_SCU_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctxfuse/scene_provider.h"
#include "ctxfuse/stats.h"
#include "ctxfuse/types.h"

namespace ctxfuse {

struct ScuOptions {
  // Candidates scoring strictly below this are ignored.
  double score_floor = 1e-6;
  // Laplace pseudo-count added to every P(o|s) cell; 0 keeps zero priors.
  double smoothing_lambda = 0.0;
};

struct CandidateProduct {
  ObjectLabel label;
  double product = 0;  // P(o|bb) * P(o|s), unnormalised
  friend bool operator==(const CandidateProduct&,
                         const CandidateProduct&) = default;
};

struct FusionResult {
  std::string image_id;
  BoundingBox box;
  ObjectLabel original_label;
  double original_score = 0;
  ObjectLabel final_label;
  // Winner's product over the sum of retained products; the original score
  // when the fallback fired.
  double final_score = 0;
  // Every retained product was zero, so the detector's own top label was
  // kept.
  bool fallback_used = false;
  std::vector<CandidateProduct> per_candidate_products;
  friend bool operator==(const FusionResult&, const FusionResult&) = default;
};

// Core rule on explicit priors: candidate_priors[i] is P(o|s) for
// detection.candidates[i]. Used directly by property tests that rescale the
// prior column.
FusionResult ScuRescore(const DetectionRecord& detection,
                        std::span<const double> candidate_priors,
                        double score_floor);

// Throws ValidationError if the scene or a candidate label is missing from
// the table, if score_floor < 0 or smoothing_lambda < 0, or if no candidate
// reaches the floor.
FusionResult ScuUpdate(const DetectionRecord& detection,
                       const SceneLabel& scene,
                       const CooccurrenceTable& table,
                       const ScuOptions& options = {});

struct ScuBatchResult {
  std::vector<FusionResult> results;  // input order
  std::size_t changed = 0;            // final_label != original_label
  std::size_t fallback = 0;
};

// Looks up each detection's scene by image_id; throws ValidationError if an
// image has no prediction. Detections are rescored in parallel.
ScuBatchResult ScuUpdateBatch(std::span<const DetectionRecord> detections,
                              std::span<const ScenePrediction> scenes,
                              const CooccurrenceTable& table,
                              const ScuOptions& options = {});

// One record per result carrying only (final_label, final_score). Source
// tags are copied from `originals`, which must be parallel to `results`.
std::vector<DetectionRecord> FusedDetections(
    std::span<const FusionResult> results,
    std::span<const DetectionRecord> originals);

// {"summary": {...}, "results": [...]}
std::string SerializeAudit(const ScuBatchResult& batch);

}  // namespace ctxfuse

#endif  // CTXFUSE_SCU_H_
