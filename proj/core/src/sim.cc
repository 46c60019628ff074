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

#include "ctxfuse/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "ctxfuse/mnf.h"
#include "json_util.h"

namespace ctxfuse {
namespace {

using internal::Json;

constexpr double kSumTolerance = 1e-9;
constexpr double kCell = 100.0;  // grid pitch in pixels
constexpr double kInset = 10.0;
constexpr double kTableScale = 1e6;

void RequireProbability(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(what + " must lie in [0, 1]");
  }
}

// Boxes on a ceil(sqrt(k))-wide grid never overlap.
BoundingBox GridBox(std::size_t slot, std::size_t count) {
  auto cols = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(count))));
  cols = std::max<std::size_t>(cols, 1);
  const double x = static_cast<double>(slot % cols) * kCell + kInset;
  const double y = static_cast<double>(slot / cols) * kCell + kInset;
  return BoundingBox{x, y, kCell - 2 * kInset, kCell - 2 * kInset};
}

// Draws from Dirichlet(alpha); zero entries stay exactly zero.
std::vector<double> SampleDirichlet(const std::vector<double>& alpha,
                                    std::mt19937_64& rng) {
  std::vector<double> out(alpha.size(), 0.0);
  double total = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0) continue;
    std::gamma_distribution<double> gamma(alpha[i], 1.0);
    out[i] = gamma(rng);
    total += out[i];
  }
  if (total <= 0) {
    // Every gamma draw underflowed; put the mass on the largest parameter.
    const auto it = std::max_element(alpha.begin(), alpha.end());
    out[static_cast<std::size_t>(it - alpha.begin())] = 1.0;
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

// Candidate list from a score vector over all classes: entries under the
// cutoff are dropped (the maximum always survives), scores are quantized so
// records survive a file round trip unchanged.
std::vector<Candidate> ToCandidates(const std::vector<double>& scores,
                                    const std::vector<ObjectLabel>& objects,
                                    double cutoff) {
  const auto best = static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != best && (scores[i] < cutoff || scores[i] <= 0)) continue;
    double q = std::clamp(QuantizeForOutput(scores[i]), 0.0, 1.0);
    out.push_back(Candidate{objects[i], q});
  }
  SortCandidates(out);
  return out;
}

// Target mean of the global detector's score vector.
std::vector<double> GlobalTarget(const SimConfig& config, std::size_t truth,
                                 std::size_t scene) {
  const std::size_t k = config.objects.size();
  std::vector<double> t(k, 0.0);
  t[truth] = config.detector_accuracy;
  if (k == 1) {
    t[truth] = 1.0;
    return t;
  }
  const double rest = 1.0 - config.detector_accuracy;
  std::vector<std::size_t> near, far;
  for (std::size_t o = 0; o < k; ++o) {
    if (o == truth) continue;
    (config.cond_matrix[o][scene] > 0 ? near : far).push_back(o);
  }
  const bool biased = config.confusion_spread == ConfusionSpread::kWithinScene &&
                      !near.empty() && !far.empty();
  if (!biased) {
    for (std::size_t o = 0; o < k; ++o) {
      if (o != truth) t[o] = rest / static_cast<double>(k - 1);
    }
    return t;
  }
  const double near_mass = rest * config.within_scene_bias;
  for (std::size_t o : near) t[o] = near_mass / static_cast<double>(near.size());
  for (std::size_t o : far) {
    t[o] = (rest - near_mass) / static_cast<double>(far.size());
  }
  return t;
}

// Target of the detector specialised to `net_scene`: it only knows the
// objects that occur in that scene.
std::vector<double> SceneNetTarget(const SimConfig& config, std::size_t truth,
                                   std::size_t net_scene, double accuracy) {
  const std::size_t k = config.objects.size();
  std::vector<std::size_t> support;
  for (std::size_t o = 0; o < k; ++o) {
    if (config.cond_matrix[o][net_scene] > 0) support.push_back(o);
  }
  std::vector<double> t(k, 0.0);
  const bool knows_truth = config.cond_matrix[truth][net_scene] > 0;
  if (!knows_truth) {
    for (std::size_t o : support) t[o] = 1.0 / static_cast<double>(support.size());
    return t;
  }
  if (support.size() == 1) {
    t[truth] = 1.0;
    return t;
  }
  t[truth] = accuracy;
  for (std::size_t o : support) {
    if (o != truth) {
      t[o] = (1.0 - accuracy) / static_cast<double>(support.size() - 1);
    }
  }
  return t;
}

std::vector<double> Scaled(std::vector<double> target, double concentration) {
  for (double& v : target) v *= concentration;
  return target;
}

std::string ImageId(std::string_view prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*s_%06zu", static_cast<int>(prefix.size()),
                prefix.data(), i + 1);
  return buf;
}

}  // namespace

void ValidateSimConfig(const SimConfig& c) {
  const std::size_t ns = c.scenes.size();
  const std::size_t no = c.objects.size();
  if (ns == 0) throw ValidationError("simulation needs at least one scene");
  if (no == 0) throw ValidationError("simulation needs at least one object");
  if (c.scene_priors.size() != ns) {
    throw ValidationError("one scene prior per scene is required");
  }
  double prior_sum = 0;
  for (std::size_t s = 0; s < ns; ++s) {
    RequireProbability(c.scene_priors[s],
                       "prior of scene \"" + c.scenes[s].name() + "\"");
    prior_sum += c.scene_priors[s];
  }
  if (std::abs(prior_sum - 1.0) > kSumTolerance) {
    throw ValidationError("scene priors must sum to 1");
  }
  if (c.cond_matrix.size() != no) {
    throw ValidationError("cond_matrix needs one row per object");
  }
  for (std::size_t o = 0; o < no; ++o) {
    if (c.cond_matrix[o].size() != ns) {
      throw ValidationError("cond_matrix row for \"" + c.objects[o].name() +
                            "\" needs one entry per scene");
    }
    for (double v : c.cond_matrix[o]) {
      RequireProbability(v, "cond_matrix entry for \"" + c.objects[o].name() +
                                "\"");
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    double sum = 0;
    for (std::size_t o = 0; o < no; ++o) sum += c.cond_matrix[o][s];
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ValidationError("cond_matrix column for scene \"" +
                            c.scenes[s].name() + "\" must sum to 1");
    }
  }
  for (std::size_t i = 0; i < no; ++i) {
    for (std::size_t j = i + 1; j < no; ++j) {
      if (c.objects[i] == c.objects[j]) {
        throw ValidationError("duplicate object \"" + c.objects[i].name() + "\"");
      }
    }
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = i + 1; j < ns; ++j) {
      if (c.scenes[i] == c.scenes[j]) {
        throw ValidationError("duplicate scene \"" + c.scenes[i].name() + "\"");
      }
    }
  }
  if (c.objects_per_image_mean && !(*c.objects_per_image_mean >= 0.0)) {
    throw ValidationError("objects_per_image mean must be >= 0");
  }
  RequireProbability(c.detector_accuracy, "detector_accuracy");
  RequireProbability(c.within_scene_bias, "within_scene_bias");
  RequireProbability(c.scene_classifier_accuracy, "scene_classifier_accuracy");
  RequireProbability(c.candidate_cutoff, "candidate_cutoff");
  if (!(c.concentration > 0.0)) {
    throw ValidationError("concentration must be > 0");
  }
  if (!c.scene_detector_accuracy.empty()) {
    if (c.scene_detector_accuracy.size() != ns) {
      throw ValidationError("scene_detector_accuracy needs one entry per scene");
    }
    for (double v : c.scene_detector_accuracy) {
      RequireProbability(v, "scene_detector_accuracy");
    }
  }
}

SimConfig ParseSimConfig(std::string_view json_text, std::string_view origin) {
  using namespace internal;
  const Json root = ParseJsonText(json_text, origin);
  GetObject(root, "simulation config");
  SimConfig c;

  for (const Json& s : GetArray(Field(root, "scenes", "simulation config"),
                                "scenes")) {
    c.scenes.emplace_back(GetString(Field(s, "name", "scene"), "scene name"));
    c.scene_priors.push_back(
        GetNumber(Field(s, "prior", "scene"), "scene prior"));
  }
  for (const auto& name :
       GetStringArray(Field(root, "objects", "simulation config"), "objects")) {
    c.objects.emplace_back(name);
  }
  for (const Json& row : GetArray(Field(root, "cond_matrix", "simulation config"),
                                  "cond_matrix")) {
    c.cond_matrix.push_back(GetNumberArray(row, "cond_matrix row"));
  }

  const Json& sizes = Field(root, "images_per_split", "simulation config");
  auto count = [](const Json& v, std::string_view what) {
    const std::int64_t n = GetInteger(v, what);
    if (n < 0) throw ValidationError(std::string(what) + " must be >= 0");
    return static_cast<std::size_t>(n);
  };
  c.train_images = count(Field(sizes, "train", "images_per_split"), "train");
  c.test_images = count(Field(sizes, "test", "images_per_split"), "test");

  if (HasField(root, "objects_per_image")) {
    const Json& per = root.at("objects_per_image");
    if (per.is_object()) {
      c.objects_per_image_mean =
          GetNumber(Field(per, "poisson_mean", "objects_per_image"),
                    "poisson_mean");
    } else {
      c.objects_per_image = count(per, "objects_per_image");
    }
  }
  auto number = [&](std::string_view key, double& out) {
    if (HasField(root, key)) out = GetNumber(root.at(std::string(key)), key);
  };
  number("detector_accuracy", c.detector_accuracy);
  number("within_scene_bias", c.within_scene_bias);
  number("concentration", c.concentration);
  number("candidate_cutoff", c.candidate_cutoff);
  number("scene_classifier_accuracy", c.scene_classifier_accuracy);
  if (HasField(root, "confusion_spread")) {
    const std::string spread =
        GetString(root.at("confusion_spread"), "confusion_spread");
    if (spread == "uniform") {
      c.confusion_spread = ConfusionSpread::kUniform;
    } else if (spread == "within_scene") {
      c.confusion_spread = ConfusionSpread::kWithinScene;
    } else {
      throw ValidationError("unknown confusion_spread \"" + spread + "\"");
    }
  }
  if (HasField(root, "scene_detector_accuracy")) {
    const Json& acc =
        GetObject(root.at("scene_detector_accuracy"), "scene_detector_accuracy");
    c.scene_detector_accuracy.assign(c.scenes.size(), c.detector_accuracy);
    for (auto it = acc.begin(); it != acc.end(); ++it) {
      const auto pos = std::find(c.scenes.begin(), c.scenes.end(),
                                 SceneLabel(it.key()));
      if (pos == c.scenes.end()) {
        throw ValidationError("scene_detector_accuracy names unknown scene \"" +
                              it.key() + "\"");
      }
      c.scene_detector_accuracy[static_cast<std::size_t>(pos - c.scenes.begin())] =
          GetNumber(it.value(), "scene_detector_accuracy");
    }
  }
  if (HasField(root, "seed")) {
    const Json& seed = root.at("seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
      throw ParseError("seed must be a non-negative integer");
    }
    if (seed.is_number_integer() && seed.get<std::int64_t>() < 0) {
      throw ValidationError("seed must be >= 0");
    }
    c.seed = seed.get<std::uint64_t>();
  }
  ValidateSimConfig(c);
  return c;
}

SimConfig LoadSimConfig(const std::filesystem::path& path) {
  return ParseSimConfig(ReadTextFile(path), path.string());
}

std::string SerializeSimConfig(const SimConfig& c) {
  using namespace internal;
  Json root = Json::object();
  Json scenes = Json::array();
  for (std::size_t s = 0; s < c.scenes.size(); ++s) {
    Json e = Json::object();
    e["name"] = c.scenes[s].name();
    e["prior"] = Number(c.scene_priors[s]);
    scenes.push_back(std::move(e));
  }
  root["scenes"] = std::move(scenes);
  Json objects = Json::array();
  for (const auto& o : c.objects) objects.push_back(o.name());
  root["objects"] = std::move(objects);
  Json cond = Json::array();
  for (const auto& row : c.cond_matrix) {
    Json r = Json::array();
    for (double v : row) r.push_back(Number(v));
    cond.push_back(std::move(r));
  }
  root["cond_matrix"] = std::move(cond);
  root["images_per_split"] = Json{{"train", c.train_images},
                                  {"test", c.test_images}};
  if (c.objects_per_image_mean) {
    root["objects_per_image"] =
        Json{{"poisson_mean", Number(*c.objects_per_image_mean)}};
  } else {
    root["objects_per_image"] = c.objects_per_image;
  }
  root["detector_accuracy"] = Number(c.detector_accuracy);
  root["confusion_spread"] = c.confusion_spread == ConfusionSpread::kUniform
                                 ? "uniform"
                                 : "within_scene";
  root["within_scene_bias"] = Number(c.within_scene_bias);
  root["concentration"] = Number(c.concentration);
  root["candidate_cutoff"] = Number(c.candidate_cutoff);
  root["scene_classifier_accuracy"] = Number(c.scene_classifier_accuracy);
  if (!c.scene_detector_accuracy.empty()) {
    Json acc = Json::object();
    for (std::size_t s = 0; s < c.scenes.size(); ++s) {
      acc[c.scenes[s].name()] = Number(c.scene_detector_accuracy[s]);
    }
    root["scene_detector_accuracy"] = std::move(acc);
  }
  root["seed"] = c.seed;
  return DumpJson(root);
}

SimOutput Generate(const SimConfig& config) {
  ValidateSimConfig(config);
  const std::size_t ns = config.scenes.size();
  const std::size_t no = config.objects.size();

  std::mt19937_64 rng(config.seed);
  std::discrete_distribution<std::size_t> pick_scene(config.scene_priors.begin(),
                                                     config.scene_priors.end());
  std::vector<std::discrete_distribution<std::size_t>> pick_object;
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> column(no);
    for (std::size_t o = 0; o < no; ++o) column[o] = config.cond_matrix[o][s];
    pick_object.emplace_back(column.begin(), column.end());
  }

  // Ground truth, scene predictions and global detections share one stream
  // in image order.
  std::vector<ImageRecord> images;
  std::vector<std::size_t> image_scene;
  std::vector<ScenePrediction> scene_predictions;
  std::vector<DetectionRecord> detections;
  const std::size_t total = config.train_images + config.test_images;
  images.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const bool train = i < config.train_images;
    ImageRecord image;
    image.image_id = train ? ImageId("train", i)
                           : ImageId("test", i - config.train_images);
    image.split = train ? Split::kTrain : Split::kTest;
    const std::size_t s = pick_scene(rng);
    image.scene = config.scenes[s];

    std::size_t k = config.objects_per_image;
    if (config.objects_per_image_mean) {
      std::poisson_distribution<std::size_t> poisson(*config.objects_per_image_mean);
      k = *config.objects_per_image_mean > 0 ? poisson(rng) : 0;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t o = pick_object[s](rng);
      image.objects.push_back(GroundTruthObject{config.objects[o], GridBox(j, k)});
    }

    if (!train) {
      std::size_t predicted = s;
      if (ns > 1) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (unit(rng) >= config.scene_classifier_accuracy) {
          std::uniform_int_distribution<std::size_t> other(0, ns - 2);
          predicted = other(rng);
          if (predicted >= s) ++predicted;
        }
      }
      scene_predictions.push_back(ScenePrediction{
          image.image_id, config.scenes[predicted],
          config.scene_classifier_accuracy});
      for (const auto& gt : image.objects) {
        const auto truth = static_cast<std::size_t>(
            std::find(config.objects.begin(), config.objects.end(), gt.label) -
            config.objects.begin());
        const auto scores = SampleDirichlet(
            Scaled(GlobalTarget(config, truth, s), config.concentration), rng);
        detections.push_back(DetectionRecord{
            image.image_id, gt.box,
            ToCandidates(scores, config.objects, config.candidate_cutoff),
            std::nullopt});
      }
    }
    image_scene.push_back(s);
    images.push_back(std::move(image));
  }

  // Each specialised detector draws from its own stream so that adding or
  // removing one leaves the others and the global outputs unchanged.
  std::vector<std::vector<DetectionRecord>> scene_detections(ns);
  for (std::size_t net = 0; net < ns; ++net) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(net + 1)};
    std::mt19937_64 net_rng(seq);
    const double accuracy = config.scene_detector_accuracy.empty()
                                ? config.detector_accuracy
                                : config.scene_detector_accuracy[net];
    for (const auto& image : images) {
      if (image.split != Split::kTest) continue;
      for (const auto& gt : image.objects) {
        const auto truth = static_cast<std::size_t>(
            std::find(config.objects.begin(), config.objects.end(), gt.label) -
            config.objects.begin());
        const auto scores = SampleDirichlet(
            Scaled(SceneNetTarget(config, truth, net, accuracy),
                   config.concentration),
            net_rng);
        scene_detections[net].push_back(DetectionRecord{
            image.image_id, gt.box,
            ToCandidates(scores, config.objects, config.candidate_cutoff),
            std::nullopt});
      }
    }
  }

  SimOutput out{Dataset::Create(config.objects, config.scenes, std::move(images)),
                std::move(scene_predictions), std::move(detections),
                std::move(scene_detections)};
  return out;
}

void WriteSimOutputs(const SimOutput& output, const SimConfig& config,
                     const std::filesystem::path& out_dir) {
  using namespace internal;
  SaveManifest(output.dataset, out_dir / "manifest.json");
  SaveScenePredictions(output.scene_predictions,
                       out_dir / "scene_predictions.json");
  SaveDetections(output.detections, out_dir / "detections.json");
  Json entries = Json::object();
  for (std::size_t s = 0; s < config.scenes.size(); ++s) {
    const std::string rel =
        "scene_detections/" + SceneFileStem(config.scenes[s]) + ".json";
    SaveDetections(output.scene_detections[s], out_dir / rel);
    entries[config.scenes[s].name()] = rel;
  }
  Json registry = Json::object();
  registry["fallback"] = "detections.json";
  registry["entries"] = std::move(entries);
  WriteTextFile(out_dir / "registry.json", DumpJson(registry));
}

CooccurrenceTable TableFromConfig(const SimConfig& config) {
  ValidateSimConfig(config);
  const std::size_t ns = config.scenes.size();
  const std::size_t no = config.objects.size();
  std::vector<std::vector<Count>> pairs(no, std::vector<Count>(ns, 0));
  for (std::size_t o = 0; o < no; ++o) {
    for (std::size_t s = 0; s < ns; ++s) {
      pairs[o][s] = static_cast<Count>(
          std::llround(config.cond_matrix[o][s] * kTableScale));
    }
  }
  std::vector<Count> scene_images(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    scene_images[s] =
        static_cast<Count>(std::llround(config.scene_priors[s] * kTableScale));
  }
  return CooccurrenceTable::FromCounts(config.objects, config.scenes,
                                       std::move(pairs), std::move(scene_images));
}

ObjectLabel BayesOracle(const DetectionRecord& detection,
                        const SceneLabel& scene, const SimConfig& config) {
  const auto scene_pos =
      std::find(config.scenes.begin(), config.scenes.end(), scene);
  if (scene_pos == config.scenes.end()) {
    throw ValidationError("unknown scene \"" + scene.name() + "\"");
  }
  const auto s = static_cast<std::size_t>(scene_pos - config.scenes.begin());
  if (detection.candidates.empty()) {
    throw ValidationError("detection has no candidates");
  }

  auto score_of = [&](const ObjectLabel& label) {
    for (const auto& c : detection.candidates) {
      if (c.label == label) return c.score;
    }
    return 0.0;
  };

  // Iterate labels in ascending order so the first strict maximum wins ties.
  std::vector<std::size_t> order(config.objects.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.objects[a] < config.objects[b];
  });
  double best_product = 0;
  std::optional<std::size_t> best;
  for (std::size_t o : order) {
    const double p = score_of(config.objects[o]) * config.cond_matrix[o][s];
    if (p > best_product) {
      best_product = p;
      best = o;
    }
  }
  if (best) return config.objects[*best];

  ObjectLabel fallback = detection.candidates.front().label;
  double fallback_score = detection.candidates.front().score;
  for (const auto& c : detection.candidates) {
    if (c.score > fallback_score ||
        (c.score == fallback_score && c.label < fallback)) {
      fallback = c.label;
      fallback_score = c.score;
    }
  }
  return fallback;
}

std::string_view PipelineName(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::kBaseline: return "baseline";
    case Pipeline::kScu: return "scu";
    case Pipeline::kMnf: return "mnf";
  }
  return "baseline";
}

Pipeline ParsePipeline(std::string_view text) {
  if (text == "baseline") return Pipeline::kBaseline;
  if (text == "scu") return Pipeline::kScu;
  if (text == "mnf") return Pipeline::kMnf;
  throw ValidationError("unknown pipeline \"" + std::string(text) + "\"");
}

ExperimentResult RunExperiment(const SimConfig& config, Pipeline pipeline,
                               const ExperimentOptions& options) {
  SimOutput sim = Generate(config);
  const Dataset& dataset = sim.dataset;

  std::vector<ScenePrediction> scenes;
  if (options.ground_truth_scenes) {
    for (const auto& image : dataset.images()) {
      if (image.split == Split::kTest) {
        scenes.push_back(ScenePrediction{image.image_id, image.scene, 1.0});
      }
    }
  } else {
    scenes = sim.scene_predictions;
  }

  ExperimentResult result;
  result.pipeline = pipeline;
  switch (pipeline) {
    case Pipeline::kBaseline:
      result.predictions = sim.detections;
      break;
    case Pipeline::kScu: {
      const CooccurrenceTable table =
          options.exact_table ? TableFromConfig(config)
                              : ComputeTable(dataset, SplitSelector::kTrain);
      const ScuBatchResult batch =
          ScuUpdateBatch(sim.detections, scenes, table, options.scu);
      result.predictions = FusedDetections(batch.results, sim.detections);
      break;
    }
    case Pipeline::kMnf: {
      const CooccurrenceTable table =
          ComputeTable(dataset, SplitSelector::kTrain);
      const SceneFilterResult filtered =
          FilterScenes(table, dataset, options.alpha);
      SceneNetRegistry registry;
      for (std::size_t s = 0; s < config.scenes.size(); ++s) {
        if (std::find(filtered.retained.begin(), filtered.retained.end(),
                      config.scenes[s]) == filtered.retained.end()) {
          continue;
        }
        registry.Register(config.scenes[s],
                          std::make_shared<RecordDetectionSource>(
                              sim.scene_detections[s]));
      }
      registry.SetFallback(
          std::make_shared<RecordDetectionSource>(sim.detections));
      const SceneProvider provider =
          options.ground_truth_scenes
              ? SceneProvider::GroundTruth()
              : SceneProvider::FromPredictions(scenes, dataset);
      result.predictions = RunMnf(dataset, provider, registry).records;
      break;
    }
  }

  const SceneClusterKey key = ComputeClusterKey(dataset, SplitSelector::kTrain);
  EvalOptions eval;
  eval.split = SplitSelector::kTest;
  const auto thresholds = DefaultThresholds();
  result.report = Evaluate(dataset, result.predictions, key, eval, thresholds);
  result.accuracy = result.report.total_recall;
  return result;
}

}  // namespace ctxfuse
