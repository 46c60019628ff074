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

// Deliberately naive reference implementations. They share no code with the
// library beyond the data types, so agreement between the two is evidence
// rather than tautology.

#ifndef CTXFUSE_TESTS_ORACLES_H_
#define CTXFUSE_TESTS_ORACLES_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "ctxfuse/types.h"

namespace ctxfuse::testing {

struct IndicatorTable {
  std::vector<std::vector<std::uint64_t>> pair;  // [object][scene]
  std::vector<std::uint64_t> object_count;
  std::vector<std::uint64_t> per_scene;  // detections per scene
  std::vector<std::uint64_t> scene_images;
  std::uint64_t m = 0;
  std::uint64_t n = 0;

  double Cond(std::size_t o, std::size_t s) const {
    return per_scene[s] == 0 ? 0.0
                             : static_cast<double>(pair[o][s]) /
                                   static_cast<double>(per_scene[s]);
  }
  double ObjectPrior(std::size_t o) const {
    return m == 0 ? 0.0
                  : static_cast<double>(object_count[o]) / static_cast<double>(m);
  }
  double ScenePrior(std::size_t s) const {
    return n == 0 ? 0.0
                  : static_cast<double>(scene_images[s]) / static_cast<double>(n);
  }
};

// Every count is a sum of 0/1 indicators over (image, annotation) pairs,
// one full pass per table cell.
inline IndicatorTable CountByIndicators(const Dataset& dataset,
                                        SplitSelector split) {
  const auto& objects = dataset.object_classes();
  const auto& scenes = dataset.scene_classes();
  IndicatorTable t;
  t.pair.assign(objects.size(), std::vector<std::uint64_t>(scenes.size(), 0));
  t.object_count.assign(objects.size(), 0);
  t.per_scene.assign(scenes.size(), 0);
  t.scene_images.assign(scenes.size(), 0);

  for (std::size_t o = 0; o < objects.size(); ++o) {
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      for (const auto& image : dataset.images()) {
        if (!Selects(split, image.split)) continue;
        for (const auto& gt : image.objects) {
          t.pair[o][s] += (gt.label == objects[o] && image.scene == scenes[s]) ? 1 : 0;
        }
      }
    }
  }
  for (std::size_t o = 0; o < objects.size(); ++o) {
    for (const auto& image : dataset.images()) {
      if (!Selects(split, image.split)) continue;
      for (const auto& gt : image.objects) {
        t.object_count[o] += gt.label == objects[o] ? 1 : 0;
      }
    }
  }
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    for (const auto& image : dataset.images()) {
      if (!Selects(split, image.split)) continue;
      t.scene_images[s] += image.scene == scenes[s] ? 1 : 0;
      for (std::size_t k = 0; k < image.objects.size(); ++k) {
        t.per_scene[s] += image.scene == scenes[s] ? 1 : 0;
      }
    }
  }
  for (const auto& image : dataset.images()) {
    if (!Selects(split, image.split)) continue;
    t.n += 1;
    t.m += image.objects.size();
  }
  return t;
}

// argmax over every class of (candidate score or 0) x prior(class). Ties go
// to the smaller label; if every product is zero the detector's own best
// candidate wins (smaller label on equal scores).
inline ObjectLabel ExhaustiveFusion(
    const DetectionRecord& detection, const std::vector<ObjectLabel>& classes,
    const std::function<double(const ObjectLabel&)>& prior) {
  auto score = [&](const ObjectLabel& label) {
    double s = 0;
    for (const auto& c : detection.candidates) {
      if (c.label == label) s = c.score;
    }
    return s;
  };
  const ObjectLabel* best = nullptr;
  double best_value = 0;
  for (const auto& label : classes) {
    const double v = score(label) * prior(label);
    if (v <= 0) continue;
    if (best == nullptr || v > best_value ||
        (v == best_value && label < *best)) {
      best = &label;
      best_value = v;
    }
  }
  if (best != nullptr) return *best;
  const Candidate* raw = &detection.candidates.front();
  for (const auto& c : detection.candidates) {
    if (c.score > raw->score || (c.score == raw->score && c.label < raw->label)) {
      raw = &c;
    }
  }
  return raw->label;
}

}  // namespace ctxfuse::testing

#endif  // CTXFUSE_TESTS_ORACLES_H_
