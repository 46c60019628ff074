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

// Matching predictions to ground truth and scoring them.
//
// Matching is greedy and label-agnostic: predictions are visited by
// descending score and each claims the unmatched ground-truth box with the
// highest IoU at or above the threshold. Labels are compared afterwards, so a
// matched pair with the wrong label is one false positive (predicted class)
// plus one false negative (true class). Unmatched predictions and unmatched
// ground truth go to the background row and column of the confusion matrix.

#ifndef CTXFUSE_EVAL_H_
#define CTXFUSE_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxfuse/stats.h"
#include "ctxfuse/types.h"

namespace ctxfuse {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr std::string_view kBackgroundLabel = "background";

struct MatchPair {
  std::size_t prediction = 0;
  std::size_t truth = 0;
  double iou = 0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  // in matching order
  std::vector<std::size_t> unmatched_predictions;
  std::vector<std::size_t> unmatched_ground_truth;
};

// Predictions are scored by their top candidate. Equal scores are visited
// by ascending box, then input order; equal IoUs go to the earlier truth box.
MatchResult Match(std::span<const DetectionRecord> predictions,
                  const ImageRecord& truth, double iou_threshold);

struct EvalOptions {
  double iou_threshold = kDefaultIouThreshold;
  SplitSelector split = SplitSelector::kTest;
};

// Predictions and matching for one evaluated image.
struct ImageMatch {
  const ImageRecord* image = nullptr;
  std::vector<DetectionRecord> predictions;
  MatchResult match;
};

struct MatchSet {
  std::vector<ImageMatch> images;  // dataset order
  // Predictions whose image is outside the evaluated split.
  std::size_t ignored_predictions = 0;
};

// Throws ValidationError for a prediction naming an unknown image.
MatchSet MatchAll(const Dataset& dataset,
                  std::span<const DetectionRecord> predictions,
                  const EvalOptions& options = {});

struct ClassMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0;  // 0 when tp + fp = 0
  double recall = 0;     // 0 when tp + fn = 0
};

struct PrPoint {
  double threshold = 0;
  double precision = 0;
  double recall = 0;
};

struct EvalReport {
  std::vector<ObjectLabel> classes;  // dataset order
  std::vector<ClassMetrics> per_class;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double total_precision = 0;
  double total_recall = 0;

  // Confusion matrix [true][predicted] over the object classes in cluster
  // order followed by the background pseudo-class.
  std::vector<std::string> confusion_labels;
  std::vector<std::string> confusion_groups;  // assigned scene, or ""
  std::vector<std::vector<std::size_t>> confusion;

  std::vector<PrPoint> pr_curve;
  double iou_threshold = kDefaultIouThreshold;
  std::size_t ignored_predictions = 0;
};

EvalReport Score(const MatchSet& matches, const Dataset& dataset,
                 const SceneClusterKey& cluster_key, double iou_threshold);

// 20 thresholds: 0.95, 0.90, ..., 0.00.
std::vector<double> DefaultThresholds();

// At each threshold, predictions scoring below it are dropped and the
// survivors are re-matched and re-scored. Thresholds must be non-empty and
// non-increasing.
std::vector<PrPoint> PrCurve(const Dataset& dataset,
                             std::span<const DetectionRecord> predictions,
                             std::span<const double> thresholds,
                             const EvalOptions& options = {});

// MatchAll + Score + PrCurve.
EvalReport Evaluate(const Dataset& dataset,
                    std::span<const DetectionRecord> predictions,
                    const SceneClusterKey& cluster_key,
                    const EvalOptions& options,
                    std::span<const double> thresholds);

}  // namespace ctxfuse

#endif  // CTXFUSE_EVAL_H_
