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

#include "ctxfuse/scu.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ctxfuse/errors.h"
#include "ctxfuse/parallel.h"
#include "json_util.h"

namespace ctxfuse {

FusionResult ScuRescore(const DetectionRecord& detection,
                        std::span<const double> candidate_priors,
                        double score_floor) {
  if (!(score_floor >= 0.0)) throw ValidationError("score_floor must be >= 0");
  if (detection.candidates.empty()) {
    throw ValidationError("detection in \"" + detection.image_id +
                          "\" has no candidates");
  }
  if (candidate_priors.size() != detection.candidates.size()) {
    throw ValidationError("one prior per candidate is required");
  }

  FusionResult r;
  r.image_id = detection.image_id;
  r.box = detection.box;
  r.original_label = detection.top().label;
  r.original_score = detection.top().score;

  r.per_candidate_products.reserve(detection.candidates.size());
  for (std::size_t i = 0; i < detection.candidates.size(); ++i) {
    const Candidate& c = detection.candidates[i];
    if (c.score < score_floor) continue;
    r.per_candidate_products.push_back(
        CandidateProduct{c.label, c.score * candidate_priors[i]});
  }
  if (r.per_candidate_products.empty()) {
    throw ValidationError("detection in \"" + detection.image_id +
                          "\" has no candidate at or above the score floor");
  }

  double total = 0;
  const CandidateProduct* best = nullptr;
  for (const auto& p : r.per_candidate_products) {
    total += p.product;
    if (best == nullptr || p.product > best->product ||
        (p.product == best->product && p.label < best->label)) {
      best = &p;
    }
  }

  if (total > 0) {
    r.final_label = best->label;
    r.final_score = std::min(1.0, best->product / total);
  } else {
    r.final_label = r.original_label;
    r.final_score = r.original_score;
    r.fallback_used = true;
  }
  return r;
}

FusionResult ScuUpdate(const DetectionRecord& detection,
                       const SceneLabel& scene,
                       const CooccurrenceTable& table,
                       const ScuOptions& options) {
  if (!(options.smoothing_lambda >= 0.0)) {
    throw ValidationError("smoothing_lambda must be >= 0");
  }
  const auto scene_index = table.SceneIndex(scene);
  if (!scene_index) {
    throw ValidationError("scene \"" + scene.name() +
                          "\" is not in the co-occurrence table");
  }
  std::vector<double> priors;
  priors.reserve(detection.candidates.size());
  for (const Candidate& c : detection.candidates) {
    const auto object_index = table.ObjectIndex(c.label);
    if (!object_index) {
      throw ValidationError("candidate \"" + c.label.name() +
                            "\" is not in the co-occurrence table");
    }
    priors.push_back(table.SmoothedCond(*object_index, *scene_index,
                                        options.smoothing_lambda));
  }
  return ScuRescore(detection, priors, options.score_floor);
}

ScuBatchResult ScuUpdateBatch(std::span<const DetectionRecord> detections,
                              std::span<const ScenePrediction> scenes,
                              const CooccurrenceTable& table,
                              const ScuOptions& options) {
  std::unordered_map<std::string, const SceneLabel*> scene_of;
  for (const auto& p : scenes) scene_of[p.image_id] = &p.scene;
  std::vector<const SceneLabel*> lookup(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    auto it = scene_of.find(detections[i].image_id);
    if (it == scene_of.end()) {
      throw ValidationError("no scene prediction for image \"" +
                            detections[i].image_id + "\"");
    }
    lookup[i] = it->second;
  }

  ScuBatchResult batch;
  batch.results.resize(detections.size());
  ParallelFor(detections.size(), [&](std::size_t i) {
    batch.results[i] = ScuUpdate(detections[i], *lookup[i], table, options);
  });
  for (const auto& r : batch.results) {
    if (r.final_label != r.original_label) ++batch.changed;
    if (r.fallback_used) ++batch.fallback;
  }
  return batch;
}

std::vector<DetectionRecord> FusedDetections(
    std::span<const FusionResult> results,
    std::span<const DetectionRecord> originals) {
  if (results.size() != originals.size()) {
    throw ValidationError("fusion results and detections differ in length");
  }
  std::vector<DetectionRecord> out;
  out.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    DetectionRecord rec;
    rec.image_id = results[i].image_id;
    rec.box = results[i].box;
    rec.source = originals[i].source;
    rec.candidates.push_back(
        Candidate{results[i].final_label, results[i].final_score});
    out.push_back(std::move(rec));
  }
  return out;
}

std::string SerializeAudit(const ScuBatchResult& batch) {
  using internal::Json;
  Json summary = Json::object();
  summary["detections"] = batch.results.size();
  summary["changed"] = batch.changed;
  summary["fallback"] = batch.fallback;
  Json results = Json::array();
  for (const auto& r : batch.results) {
    Json item = Json::object();
    item["image_id"] = r.image_id;
    item["bbox"] = Json::array({internal::Number(r.box.x),
                                internal::Number(r.box.y),
                                internal::Number(r.box.w),
                                internal::Number(r.box.h)});
    item["original_label"] = r.original_label.name();
    item["original_score"] = internal::Number(r.original_score);
    item["final_label"] = r.final_label.name();
    item["final_score"] = internal::Number(r.final_score);
    item["fallback_used"] = r.fallback_used;
    Json products = Json::array();
    for (const auto& p : r.per_candidate_products) {
      Json pj = Json::object();
      pj["label"] = p.label.name();
      pj["product"] = internal::Number(p.product);
      products.push_back(std::move(pj));
    }
    item["products"] = std::move(products);
    results.push_back(std::move(item));
  }
  Json root = Json::object();
  root["summary"] = std::move(summary);
  root["results"] = std::move(results);
  return internal::DumpJson(root);
}

}  // namespace ctxfuse
