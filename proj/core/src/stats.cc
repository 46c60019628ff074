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

#include "ctxfuse/stats.h"

#include <cmath>
#include <utility>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "json_util.h"

namespace ctxfuse {
namespace {

double Ratio(Count num, Count den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

using internal::Json;

// Recovers the integer count behind a persisted ratio.
Count RecoverCount(double probability, Count total, const std::string& what) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ValidationError(what + ": probability outside [0, 1]");
  }
  const double raw = probability * static_cast<double>(total);
  const double rounded = std::round(raw);
  // Nine significant digits bound the relative error well below this.
  if (std::abs(raw - rounded) > 1e-6 * std::max(1.0, raw)) {
    throw ValidationError(what + ": probability is not a count ratio over " +
                          std::to_string(total));
  }
  return static_cast<Count>(rounded);
}

}  // namespace

CooccurrenceTable CooccurrenceTable::FromCounts(
    std::vector<ObjectLabel> objects, std::vector<SceneLabel> scenes,
    std::vector<std::vector<Count>> pair_counts,
    std::vector<Count> scene_image_counts) {
  std::vector<Count> object_counts(objects.size(), 0);
  Count m = 0;
  for (std::size_t o = 0; o < pair_counts.size() && o < objects.size(); ++o) {
    for (Count c : pair_counts[o]) object_counts[o] += c;
    m += object_counts[o];
  }
  Count n = 0;
  for (Count c : scene_image_counts) n += c;
  return FromCounts(std::move(objects), std::move(scenes),
                    std::move(pair_counts), std::move(object_counts),
                    std::move(scene_image_counts), m, n);
}

CooccurrenceTable CooccurrenceTable::FromCounts(
    std::vector<ObjectLabel> objects, std::vector<SceneLabel> scenes,
    std::vector<std::vector<Count>> pair_counts,
    std::vector<Count> object_counts, std::vector<Count> scene_image_counts,
    Count detection_count, Count image_count) {
  if (pair_counts.size() != objects.size() ||
      object_counts.size() != objects.size()) {
    throw ValidationError("co-occurrence counts do not match object list");
  }
  if (scene_image_counts.size() != scenes.size()) {
    throw ValidationError("scene image counts do not match scene list");
  }
  CooccurrenceTable t;
  for (std::size_t o = 0; o < objects.size(); ++o) {
    if (pair_counts[o].size() != scenes.size()) {
      throw ValidationError("co-occurrence row for \"" + objects[o].name() +
                            "\" does not match scene list");
    }
    if (!t.object_index_.emplace(objects[o].name(), o).second) {
      throw ValidationError("duplicate object \"" + objects[o].name() + "\"");
    }
  }
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (!t.scene_index_.emplace(scenes[s].name(), s).second) {
      throw ValidationError("duplicate scene \"" + scenes[s].name() + "\"");
    }
  }
  t.per_scene_detections_.assign(scenes.size(), 0);
  for (const auto& row : pair_counts) {
    for (std::size_t s = 0; s < row.size(); ++s) {
      t.per_scene_detections_[s] += row[s];
    }
  }
  Count object_total = 0;
  for (Count c : object_counts) object_total += c;
  if (object_total > detection_count) {
    throw ValidationError("object counts exceed detection count m");
  }
  t.objects_ = std::move(objects);
  t.scenes_ = std::move(scenes);
  t.pair_counts_ = std::move(pair_counts);
  t.object_counts_ = std::move(object_counts);
  t.scene_images_ = std::move(scene_image_counts);
  t.m_ = detection_count;
  t.n_ = image_count;
  return t;
}

std::optional<std::size_t> CooccurrenceTable::ObjectIndex(
    const ObjectLabel& label) const {
  auto it = object_index_.find(label.name());
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CooccurrenceTable::SceneIndex(
    const SceneLabel& label) const {
  auto it = scene_index_.find(label.name());
  if (it == scene_index_.end()) return std::nullopt;
  return it->second;
}

double CooccurrenceTable::cond(std::size_t object, std::size_t scene) const {
  return Ratio(pair_counts_[object][scene], per_scene_detections_[scene]);
}

double CooccurrenceTable::SmoothedCond(std::size_t object, std::size_t scene,
                                       double lambda) const {
  if (lambda == 0.0) return cond(object, scene);
  const double den = static_cast<double>(per_scene_detections_[scene]) +
                     lambda * static_cast<double>(objects_.size());
  return (static_cast<double>(pair_counts_[object][scene]) + lambda) / den;
}

double CooccurrenceTable::object_prior(std::size_t object) const {
  return Ratio(object_counts_[object], m_);
}

double CooccurrenceTable::scene_prior(std::size_t scene) const {
  return Ratio(scene_images_[scene], n_);
}

CooccurrenceTable ComputeTable(const Dataset& dataset, SplitSelector split) {
  const std::size_t num_objects = dataset.object_classes().size();
  const std::size_t num_scenes = dataset.scene_classes().size();
  std::vector<std::vector<Count>> pairs(num_objects,
                                        std::vector<Count>(num_scenes, 0));
  std::vector<Count> scene_images(num_scenes, 0);
  for (const auto& image : dataset.images()) {
    if (!Selects(split, image.split)) continue;
    const std::size_t s = *dataset.SceneIndex(image.scene);
    ++scene_images[s];
    for (const auto& obj : image.objects) {
      ++pairs[*dataset.ObjectIndex(obj.label)][s];
    }
  }
  return CooccurrenceTable::FromCounts(dataset.object_classes(),
                                       dataset.scene_classes(),
                                       std::move(pairs),
                                       std::move(scene_images));
}

SceneFilterResult FilterScenes(const CooccurrenceTable& table,
                               const Dataset& dataset, int alpha) {
  if (alpha < 1) throw ValidationError("alpha must be >= 1");
  std::vector<Count> train_images(dataset.scene_classes().size(), 0);
  for (const auto& image : dataset.images()) {
    if (image.split == Split::kTrain) {
      ++train_images[*dataset.SceneIndex(image.scene)];
    }
  }

  SceneFilterResult result;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < table.scene_count(); ++s) {
    const auto ds = dataset.SceneIndex(table.scenes()[s]);
    const Count images = ds ? train_images[*ds] : 0;
    if (images >= static_cast<Count>(alpha)) {
      keep.push_back(s);
      result.retained.push_back(table.scenes()[s]);
    } else {
      result.excluded.push_back(table.scenes()[s]);
    }
  }
  if (keep.empty()) {
    throw ValidationError("no scene has at least alpha=" +
                          std::to_string(alpha) + " training images");
  }

  std::vector<std::vector<Count>> pairs(table.object_count());
  std::vector<Count> object_counts(table.object_count());
  for (std::size_t o = 0; o < table.object_count(); ++o) {
    for (std::size_t s : keep) pairs[o].push_back(table.pair_count(o, s));
    object_counts[o] = table.object_detection_count(o);
  }
  std::vector<Count> scene_images;
  for (std::size_t s : keep) scene_images.push_back(table.scene_image_count(s));
  result.table = CooccurrenceTable::FromCounts(
      table.objects(), result.retained, std::move(pairs),
      std::move(object_counts), std::move(scene_images),
      table.detection_count(), table.image_count());
  return result;
}

std::vector<std::size_t> SceneClusterKey::ObjectOrder() const {
  std::vector<std::size_t> order;
  order.reserve(objects.size());
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (assignment[o] == s) order.push_back(o);
    }
  }
  for (std::size_t o = 0; o < objects.size(); ++o) {
    if (!assignment[o]) order.push_back(o);
  }
  return order;
}

SceneClusterKey ComputeClusterKey(const Dataset& dataset, SplitSelector split) {
  const CooccurrenceTable table = ComputeTable(dataset, split);
  SceneClusterKey key;
  key.objects = table.objects();
  key.scenes = table.scenes();
  key.likelihoods.assign(table.object_count(),
                         std::vector<double>(table.scene_count(), 0.0));
  key.assignment.assign(table.object_count(), std::nullopt);
  for (std::size_t o = 0; o < table.object_count(); ++o) {
    const Count total = table.object_detection_count(o);
    if (total == 0) continue;
    std::size_t best = 0;
    for (std::size_t s = 0; s < table.scene_count(); ++s) {
      key.likelihoods[o][s] = Ratio(table.pair_count(o, s), total);
      // Strict comparison keeps the earliest scene on ties.
      if (table.pair_count(o, s) > table.pair_count(o, best)) best = s;
    }
    key.assignment[o] = best;
  }
  return key;
}

std::string SerializeTable(const CooccurrenceTable& table) {
  Json root = Json::object();
  Json objects = Json::array();
  for (const auto& o : table.objects()) objects.push_back(o.name());
  Json scenes = Json::array();
  for (const auto& s : table.scenes()) scenes.push_back(s.name());
  root["objects"] = std::move(objects);
  root["scenes"] = std::move(scenes);
  Json counts = Json::object();
  counts["n"] = table.image_count();
  counts["m"] = table.detection_count();
  Json per_scene = Json::array();
  for (std::size_t s = 0; s < table.scene_count(); ++s) {
    per_scene.push_back(table.per_scene_detection_count(s));
  }
  counts["per_scene"] = std::move(per_scene);
  root["counts"] = std::move(counts);
  Json cond = Json::array();
  for (std::size_t o = 0; o < table.object_count(); ++o) {
    Json row = Json::array();
    for (std::size_t s = 0; s < table.scene_count(); ++s) {
      row.push_back(internal::Number(table.cond(o, s)));
    }
    cond.push_back(std::move(row));
  }
  root["cond"] = std::move(cond);
  Json object_prior = Json::array();
  for (std::size_t o = 0; o < table.object_count(); ++o) {
    object_prior.push_back(internal::Number(table.object_prior(o)));
  }
  root["object_prior"] = std::move(object_prior);
  Json scene_prior = Json::array();
  for (std::size_t s = 0; s < table.scene_count(); ++s) {
    scene_prior.push_back(internal::Number(table.scene_prior(s)));
  }
  root["scene_prior"] = std::move(scene_prior);
  return internal::DumpJson(root);
}

CooccurrenceTable ParseTable(std::string_view json_text,
                             std::string_view origin) {
  const std::string where(origin);
  const Json root = internal::ParseJsonText(json_text, origin);
  std::vector<ObjectLabel> objects;
  for (auto& name : internal::GetStringArray(
           internal::Field(root, "objects", where), where + " objects")) {
    if (name.empty()) throw ValidationError(where + ": empty object label");
    objects.emplace_back(std::move(name));
  }
  std::vector<SceneLabel> scenes;
  for (auto& name : internal::GetStringArray(
           internal::Field(root, "scenes", where), where + " scenes")) {
    if (name.empty()) throw ValidationError(where + ": empty scene label");
    scenes.emplace_back(std::move(name));
  }
  const Json& counts = internal::Field(root, "counts", where);
  const auto nonneg = [&](const Json& v, const std::string& ctx) {
    const std::int64_t x = internal::GetInteger(v, ctx);
    if (x < 0) throw ValidationError(ctx + ": negative count");
    return static_cast<Count>(x);
  };
  const Count n = nonneg(internal::Field(counts, "n", where), where + " n");
  const Count m = nonneg(internal::Field(counts, "m", where), where + " m");
  const Json& per_scene_json =
      internal::GetArray(internal::Field(counts, "per_scene", where), where);
  std::vector<Count> per_scene;
  for (const auto& v : per_scene_json) {
    per_scene.push_back(nonneg(v, where + " per_scene"));
  }
  if (per_scene.size() != scenes.size()) {
    throw ValidationError(where + ": per_scene length != number of scenes");
  }

  const Json& cond = internal::GetArray(internal::Field(root, "cond", where),
                                        where + " cond");
  if (cond.size() != objects.size()) {
    throw ValidationError(where + ": cond has wrong number of rows");
  }
  std::vector<std::vector<Count>> pairs(objects.size());
  for (std::size_t o = 0; o < objects.size(); ++o) {
    const auto row = internal::GetNumberArray(cond[o], where + " cond");
    if (row.size() != scenes.size()) {
      throw ValidationError(where + ": cond row for \"" + objects[o].name() +
                            "\" has wrong length");
    }
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      pairs[o].push_back(RecoverCount(
          row[s], per_scene[s],
          where + " cond[" + objects[o].name() + "][" + scenes[s].name() + "]"));
    }
  }
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    Count sum = 0;
    for (std::size_t o = 0; o < objects.size(); ++o) sum += pairs[o][s];
    if (sum != per_scene[s]) {
      throw ValidationError(where + ": column \"" + scenes[s].name() +
                            "\" does not sum to its per_scene count");
    }
  }

  const auto object_prior = internal::GetNumberArray(
      internal::Field(root, "object_prior", where), where + " object_prior");
  const auto scene_prior = internal::GetNumberArray(
      internal::Field(root, "scene_prior", where), where + " scene_prior");
  if (object_prior.size() != objects.size() ||
      scene_prior.size() != scenes.size()) {
    throw ValidationError(where + ": prior vector has wrong length");
  }
  std::vector<Count> object_counts;
  for (std::size_t o = 0; o < objects.size(); ++o) {
    object_counts.push_back(
        RecoverCount(object_prior[o], m, where + " object_prior"));
  }
  std::vector<Count> scene_images;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    scene_images.push_back(
        RecoverCount(scene_prior[s], n, where + " scene_prior"));
  }
  return CooccurrenceTable::FromCounts(
      std::move(objects), std::move(scenes), std::move(pairs),
      std::move(object_counts), std::move(scene_images), m, n);
}

void SaveTable(const CooccurrenceTable& table,
               const std::filesystem::path& path) {
  WriteTextFile(path, SerializeTable(table));
}

CooccurrenceTable LoadTable(const std::filesystem::path& path) {
  return ParseTable(ReadTextFile(path), path.string());
}

std::string TableToCsv(const CooccurrenceTable& table) {
  std::string out = "object";
  for (const auto& s : table.scenes()) out += "," + internal::CsvField(s.name());
  out += "\n";
  for (std::size_t o = 0; o < table.object_count(); ++o) {
    out += internal::CsvField(table.objects()[o].name());
    for (std::size_t s = 0; s < table.scene_count(); ++s) {
      out += "," + internal::Fixed(table.cond(o, s), 3);
    }
    out += "\n";
  }
  return out;
}

std::string SerializeClusterKey(const SceneClusterKey& key) {
  Json root = Json::object();
  Json scenes = Json::array();
  for (const auto& s : key.scenes) scenes.push_back(s.name());
  root["scenes"] = std::move(scenes);
  Json rows = Json::array();
  for (std::size_t o : key.ObjectOrder()) {
    Json row = Json::object();
    row["object"] = key.objects[o].name();
    row["scene"] = key.assignment[o]
                       ? Json(key.scenes[*key.assignment[o]].name())
                       : Json(nullptr);
    Json lik = Json::array();
    for (double v : key.likelihoods[o]) lik.push_back(internal::Number(v));
    row["likelihoods"] = std::move(lik);
    rows.push_back(std::move(row));
  }
  root["clusters"] = std::move(rows);
  return internal::DumpJson(root);
}

}  // namespace ctxfuse
