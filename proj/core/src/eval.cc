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

#include "ctxfuse/eval.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "ctxfuse/errors.h"

namespace ctxfuse {
namespace {

double SafeRatio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MatchResult Match(std::span<const DetectionRecord> predictions,
                  const ImageRecord& truth, double iou_threshold) {
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double sa = predictions[a].top().score;
                     const double sb = predictions[b].top().score;
                     if (sa != sb) return sa > sb;
                     return predictions[a].box < predictions[b].box;
                   });

  MatchResult result;
  std::vector<bool> taken(truth.objects.size(), false);
  std::vector<bool> matched(predictions.size(), false);
  for (std::size_t p : order) {
    std::optional<std::size_t> best;
    double best_iou = 0;
    for (std::size_t g = 0; g < truth.objects.size(); ++g) {
      if (taken[g]) continue;
      const double iou = Iou(predictions[p].box, truth.objects[g].box);
      if (iou >= iou_threshold && (!best || iou > best_iou)) {
        best = g;
        best_iou = iou;
      }
    }
    if (best) {
      taken[*best] = true;
      matched[p] = true;
      result.pairs.push_back(MatchPair{p, *best, best_iou});
    }
  }
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    if (!matched[p]) result.unmatched_predictions.push_back(p);
  }
  for (std::size_t g = 0; g < truth.objects.size(); ++g) {
    if (!taken[g]) result.unmatched_ground_truth.push_back(g);
  }
  return result;
}

MatchSet MatchAll(const Dataset& dataset,
                  std::span<const DetectionRecord> predictions,
                  const EvalOptions& options) {
  std::unordered_map<std::string, std::vector<DetectionRecord>> by_image;
  MatchSet set;
  for (const auto& p : predictions) {
    const ImageRecord* image = dataset.FindImage(p.image_id);
    if (!image) {
      throw ValidationError("prediction for unknown image \"" + p.image_id +
                            "\"");
    }
    if (!Selects(options.split, image->split)) {
      ++set.ignored_predictions;
      continue;
    }
    by_image[p.image_id].push_back(p);
  }
  for (const auto& image : dataset.images()) {
    if (!Selects(options.split, image.split)) continue;
    ImageMatch im;
    im.image = &image;
    if (auto it = by_image.find(image.image_id); it != by_image.end()) {
      im.predictions = std::move(it->second);
    }
    im.match = Match(im.predictions, image, options.iou_threshold);
    set.images.push_back(std::move(im));
  }
  return set;
}

EvalReport Score(const MatchSet& matches, const Dataset& dataset,
                 const SceneClusterKey& cluster_key, double iou_threshold) {
  const std::size_t k = dataset.object_classes().size();
  const std::size_t bg = k;  // background index in dataset-order space
  std::vector<std::vector<std::size_t>> conf(k + 1,
                                             std::vector<std::size_t>(k + 1));
  EvalReport report;
  report.classes = dataset.object_classes();
  report.per_class.assign(k, ClassMetrics{});
  report.iou_threshold = iou_threshold;
  report.ignored_predictions = matches.ignored_predictions;

  const auto object_index = [&](const ObjectLabel& label) {
    const auto idx = dataset.ObjectIndex(label);
    if (!idx) {
      throw ValidationError("label \"" + label.name() +
                            "\" is not a dataset object class");
    }
    return *idx;
  };

  for (const auto& im : matches.images) {
    for (const auto& pair : im.match.pairs) {
      const std::size_t t = object_index(im.image->objects[pair.truth].label);
      const std::size_t p =
          object_index(im.predictions[pair.prediction].top().label);
      ++conf[t][p];
      if (t == p) {
        ++report.per_class[t].tp;
      } else {
        ++report.per_class[p].fp;
        ++report.per_class[t].fn;
      }
    }
    for (std::size_t pi : im.match.unmatched_predictions) {
      const std::size_t p = object_index(im.predictions[pi].top().label);
      ++report.per_class[p].fp;
      ++conf[bg][p];
    }
    for (std::size_t gi : im.match.unmatched_ground_truth) {
      const std::size_t t = object_index(im.image->objects[gi].label);
      ++report.per_class[t].fn;
      ++conf[t][bg];
    }
  }

  for (auto& m : report.per_class) {
    m.precision = SafeRatio(m.tp, m.tp + m.fp);
    m.recall = SafeRatio(m.tp, m.tp + m.fn);
    report.tp += m.tp;
    report.fp += m.fp;
    report.fn += m.fn;
  }
  report.total_precision = SafeRatio(report.tp, report.tp + report.fp);
  report.total_recall = SafeRatio(report.tp, report.tp + report.fn);

  // Cluster order, keyed by label so a key computed on another dataset with
  // the same vocabulary still applies.
  std::vector<std::size_t> order;
  std::vector<std::string> groups;
  std::vector<bool> placed(k, false);
  if (!cluster_key.objects.empty()) {
    for (std::size_t ko : cluster_key.ObjectOrder()) {
      const auto idx = dataset.ObjectIndex(cluster_key.objects[ko]);
      if (!idx || placed[*idx]) continue;
      placed[*idx] = true;
      order.push_back(*idx);
      const auto& a = cluster_key.assignment[ko];
      groups.push_back(a ? cluster_key.scenes[*a].name() : std::string());
    }
  }
  for (std::size_t o = 0; o < k; ++o) {
    if (!placed[o]) {
      order.push_back(o);
      groups.emplace_back();
    }
  }
  order.push_back(bg);
  groups.emplace_back();

  for (std::size_t idx : order) {
    report.confusion_labels.push_back(
        idx == bg ? std::string(kBackgroundLabel)
                  : dataset.object_classes()[idx].name());
  }
  report.confusion_groups = std::move(groups);
  report.confusion.assign(order.size(),
                          std::vector<std::size_t>(order.size(), 0));
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (std::size_t c = 0; c < order.size(); ++c) {
      report.confusion[r][c] = conf[order[r]][order[c]];
    }
  }
  return report;
}

std::vector<double> DefaultThresholds() {
  std::vector<double> t;
  for (int i = 19; i >= 0; --i) t.push_back(i * 0.05);
  return t;
}

std::vector<PrPoint> PrCurve(const Dataset& dataset,
                             std::span<const DetectionRecord> predictions,
                             std::span<const double> thresholds,
                             const EvalOptions& options) {
  if (thresholds.empty()) throw ValidationError("empty threshold list");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] > thresholds[i - 1]) {
      throw ValidationError("thresholds must be non-increasing");
    }
  }
  std::vector<PrPoint> curve;
  std::vector<DetectionRecord> kept;
  for (double threshold : thresholds) {
    kept.clear();
    for (const auto& p : predictions) {
      if (p.top().score >= threshold) kept.push_back(p);
    }
    const MatchSet matches = MatchAll(dataset, kept, options);
    const EvalReport r =
        Score(matches, dataset, SceneClusterKey{}, options.iou_threshold);
    curve.push_back(PrPoint{threshold, r.total_precision, r.total_recall});
  }
  return curve;
}

EvalReport Evaluate(const Dataset& dataset,
                    std::span<const DetectionRecord> predictions,
                    const SceneClusterKey& cluster_key,
                    const EvalOptions& options,
                    std::span<const double> thresholds) {
  EvalReport report = Score(MatchAll(dataset, predictions, options), dataset,
                            cluster_key, options.iou_threshold);
  report.pr_curve = PrCurve(dataset, predictions, thresholds, options);
  return report;
}

}  // namespace ctxfuse
