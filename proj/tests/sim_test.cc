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


#include <gtest/gtest.h>

#include <cmath>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "ctxfuse/scu.h"
#include "ctxfuse/sim.h"
#include "oracles.h"
#include "test_support.h"

namespace ctxfuse {
namespace {

using testing::MakeDetection;
using testing::ObjectLabels;
using testing::SceneLabels;

// Two scenes with disjoint supports: s0 holds a, b, c and s1 holds d, e, f.
SimConfig Disjoint(std::vector<double> col0, std::vector<double> col1) {
  SimConfig c;
  c.scenes = SceneLabels({"s0", "s1"});
  c.scene_priors = {0.5, 0.5};
  c.objects = ObjectLabels({"a", "b", "c", "d", "e", "f"});
  for (std::size_t o = 0; o < 6; ++o) {
    c.cond_matrix.push_back({o < 3 ? col0[o] : 0.0, o < 3 ? 0.0 : col1[o - 3]});
  }
  c.train_images = 200;
  c.test_images = 200;
  return c;
}

SimConfig Skewed() { return Disjoint({0.6, 0.3, 0.1}, {0.5, 0.25, 0.25}); }

TEST(SimConfigTest, Validation) {
  EXPECT_NO_THROW(ValidateSimConfig(Skewed()));
  SimConfig c = Skewed();
  c.scene_priors = {0.5, 0.6};
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
  c = Skewed();
  c.cond_matrix[0][0] = 0.7;
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
  c = Skewed();
  c.detector_accuracy = 1.5;
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
  c = Skewed();
  c.cond_matrix.pop_back();
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
  c = Skewed();
  c.scene_classifier_accuracy = -0.1;
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
  c = Skewed();
  c.scene_detector_accuracy = {0.5};
  EXPECT_THROW(ValidateSimConfig(c), ValidationError);
}

TEST(SimConfigTest, RoundTripAndShippedDefault) {
  SimConfig c = Skewed();
  c.objects_per_image_mean = 2.5;
  c.confusion_spread = ConfusionSpread::kWithinScene;
  c.scene_detector_accuracy = {0.7, 0.8};
  c.seed = 1234567890123ull;
  const std::string text = SerializeSimConfig(c);
  EXPECT_EQ(SerializeSimConfig(ParseSimConfig(text)), text);
  const SimConfig shipped =
      LoadSimConfig(testing::SourcePath("configs/sim_default.json"));
  EXPECT_EQ(shipped.seed, 42u);
  EXPECT_EQ(shipped.detector_accuracy, 0.6);
  EXPECT_THROW(ParseSimConfig("{\"scenes\": 3}"), Error);
  EXPECT_THROW(ParseSimConfig("not json"), ParseError);
}

TEST(GenerateTest, SameSeedSameBytes) {
  const SimConfig c = Skewed();
  const SimOutput a = Generate(c);
  const SimOutput b = Generate(c);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.detections, b.detections);
  EXPECT_EQ(a.scene_predictions, b.scene_predictions);
  EXPECT_EQ(a.scene_detections, b.scene_detections);

  const auto d1 = testing::ScratchDir("sim_a");
  const auto d2 = testing::ScratchDir("sim_b");
  WriteSimOutputs(a, c, d1);
  WriteSimOutputs(b, c, d2);
  for (const char* f : {"manifest.json", "detections.json",
                        "scene_predictions.json", "registry.json",
                        "scene_detections/s0.json", "scene_detections/s1.json"}) {
    EXPECT_EQ(ReadTextFile(d1 / f), ReadTextFile(d2 / f)) << f;
  }

  SimConfig other = c;
  other.seed = 43;
  EXPECT_NE(Generate(other).detections, a.detections);
}

TEST(GenerateTest, WrittenFilesLoadBackUnchanged) {
  const SimConfig c = Skewed();
  const SimOutput out = Generate(c);
  const auto dir = testing::ScratchDir("sim_reload");
  WriteSimOutputs(out, c, dir);
  const Dataset d = LoadManifest(dir / "manifest.json");
  EXPECT_EQ(d, out.dataset);
  EXPECT_EQ(LoadDetections(dir / "detections.json", d), out.detections);
}

TEST(GenerateTest, PerfectDetectorIsAlwaysRight) {
  SimConfig c = Skewed();
  c.detector_accuracy = 1.0;
  c.scene_classifier_accuracy = 1.0;
  const SimOutput out = Generate(c);
  ASSERT_EQ(out.detections.size(), out.dataset.DetectionCount(SplitSelector::kTest));
  std::size_t i = 0;
  for (const auto& image : out.dataset.images()) {
    if (image.split != Split::kTest) continue;
    for (const auto& gt : image.objects) {
      EXPECT_EQ(out.detections[i].top().label, gt.label);
      EXPECT_EQ(out.detections[i].box, gt.box);
      ++i;
    }
  }
  for (const auto& p : out.scene_predictions) {
    EXPECT_EQ(p.scene, out.dataset.FindImage(p.image_id)->scene);
  }
  const ExperimentResult r = RunExperiment(c, Pipeline::kBaseline);
  EXPECT_EQ(r.report.total_precision, 1.0);
  EXPECT_EQ(r.report.total_recall, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(GenerateTest, EmpiricalTableConvergesToCondMatrix) {
  SimConfig c = Skewed();
  c.detector_accuracy = 0.5;
  c.train_images = 3400;  // 10,200 ground-truth objects
  c.test_images = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    c.seed = seed;
    const SimOutput out = Generate(c);
    const CooccurrenceTable t = ComputeTable(out.dataset, SplitSelector::kTrain);
    ASSERT_GE(t.detection_count(), 10000u);
    for (std::size_t o = 0; o < c.objects.size(); ++o) {
      for (std::size_t s = 0; s < c.scenes.size(); ++s) {
        EXPECT_NEAR(t.cond(o, s), c.cond_matrix[o][s], 0.02)
            << "seed " << seed << " o " << o << " s " << s;
      }
    }
  }
}

TEST(GenerateTest, CandidatesAreCanonical) {
  const SimOutput out = Generate(Skewed());
  for (const auto& d : out.detections) {
    double sum = 0;
    for (std::size_t i = 0; i < d.candidates.size(); ++i) {
      sum += d.candidates[i].score;
      EXPECT_GE(d.candidates[i].score, 0.0);
      if (i > 0) {
        EXPECT_GE(d.candidates[i - 1].score, d.candidates[i].score);
      }
    }
    EXPECT_LE(sum, 1.0 + 1e-6);
  }
}

TEST(BayesOracleTest, BelowFloorCandidateSplitsOracleFromScu) {
  SimConfig c;
  c.scenes = SceneLabels({"S"});
  c.scene_priors = {1.0};
  c.objects = ObjectLabels({"A", "B"});
  c.cond_matrix = {{1.0}, {0.0}};
  const DetectionRecord d =
      MakeDetection("i", {0, 0, 1, 1}, {{"B", 0.9}, {"A", 5e-7}});
  const SceneLabel s("S");
  EXPECT_EQ(BayesOracle(d, s, c).name(), "A");
  const CooccurrenceTable t = TableFromConfig(c);
  const FusionResult floored = ScuUpdate(d, s, t);
  EXPECT_EQ(floored.final_label.name(), "B");
  EXPECT_TRUE(floored.fallback_used);
  ScuOptions no_floor;
  no_floor.score_floor = 0;
  EXPECT_EQ(ScuUpdate(d, s, t, no_floor).final_label.name(), "A");
}

TEST(BayesOracleTest, UniformColumnGivesRawArgmax) {
  SimConfig c;
  c.scenes = SceneLabels({"S"});
  c.scene_priors = {1.0};
  c.objects = ObjectLabels({"A", "B", "C", "D"});
  c.cond_matrix = {{0.25}, {0.25}, {0.25}, {0.25}};
  const DetectionRecord d =
      MakeDetection("i", {0, 0, 1, 1}, {{"C", 0.5}, {"A", 0.3}, {"D", 0.2}});
  EXPECT_EQ(BayesOracle(d, SceneLabel("S"), c).name(), "C");
}

TEST(BayesOracleTest, AgreesWithScuAndTestOracleOnGeneratedDetections) {
  SimConfig c = Skewed();
  c.detector_accuracy = 0.4;
  c.concentration = 2;
  ScuOptions no_floor;
  no_floor.score_floor = 0;
  for (std::uint64_t seed : {7u, 8u}) {
    c.seed = seed;
    const SimOutput out = Generate(c);
    const CooccurrenceTable t = TableFromConfig(c);
    for (const auto& d : out.detections) {
      const SceneLabel& s = out.dataset.FindImage(d.image_id)->scene;
      const std::size_t si = *t.SceneIndex(s);
      const ObjectLabel expected = BayesOracle(d, s, c);
      EXPECT_EQ(ScuUpdate(d, s, t, no_floor).final_label, expected);
      EXPECT_EQ(testing::ExhaustiveFusion(
                    d, c.objects,
                    [&](const ObjectLabel& o) {
                      return c.cond_matrix[*out.dataset.ObjectIndex(o)][si];
                    }),
                expected);
    }
  }
}

TEST(TableFromConfigTest, ReproducesCondMatrix) {
  const SimConfig c = Skewed();
  const CooccurrenceTable t = TableFromConfig(c);
  for (std::size_t o = 0; o < c.objects.size(); ++o) {
    for (std::size_t s = 0; s < c.scenes.size(); ++s) {
      EXPECT_EQ(t.cond(o, s), c.cond_matrix[o][s]);
    }
  }
}

TEST(ExperimentTest, UniformCondMatrixChangesNothing) {
  SimConfig c;
  c.scenes = SceneLabels({"s0", "s1"});
  c.scene_priors = {0.5, 0.5};
  c.objects = ObjectLabels({"a", "b", "c", "d", "e"});
  c.cond_matrix.assign(5, {0.2, 0.2});
  c.train_images = 50;
  c.test_images = 300;
  c.concentration = 3;
  ExperimentOptions exact;
  exact.exact_table = true;
  const ExperimentResult base = RunExperiment(c, Pipeline::kBaseline, exact);
  const ExperimentResult scu = RunExperiment(c, Pipeline::kScu, exact);
  EXPECT_EQ(scu.accuracy, base.accuracy);
  ASSERT_EQ(scu.predictions.size(), base.predictions.size());
  for (std::size_t i = 0; i < scu.predictions.size(); ++i) {
    EXPECT_EQ(scu.predictions[i].top().label, base.predictions[i].top().label);
  }
}

// Columns uniform on their support: the context can only veto labels that
// cannot occur, so with true scenes and the exact table SCU never loses a
// detection the baseline got right.
TEST(ExperimentTest, VetoOnlyContextNeverHurts) {
  ExperimentOptions exact;
  exact.exact_table = true;
  for (double a : {0.3, 0.6, 0.9}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SimConfig c;
      c.scenes = SceneLabels({"s0", "s1", "s2"});
      c.scene_priors = {0.25, 0.25, 0.5};
      c.objects = ObjectLabels({"a", "b", "c", "d", "e", "f", "g", "h"});
      // Every column is flat on its support; s1 and s2 share g and h.
      c.cond_matrix = {{0.25, 0, 0},   {0.25, 0, 0},   {0.25, 0, 0},
                       {0.25, 0, 0},   {0, 0.25, 0},   {0, 0.25, 0},
                       {0, 0.25, 0.5}, {0, 0.25, 0.5}};
      c.train_images = 50;
      c.test_images = 300;
      c.detector_accuracy = a;
      c.concentration = 3;
      c.seed = seed;
      const ExperimentResult base = RunExperiment(c, Pipeline::kBaseline, exact);
      const ExperimentResult scu = RunExperiment(c, Pipeline::kScu, exact);
      EXPECT_GE(scu.accuracy, base.accuracy) << a << " " << seed;
    }
  }
}

TEST(ExperimentTest, PipelinesOnTheShippedConfig) {
  const SimConfig c =
      LoadSimConfig(testing::SourcePath("configs/sim_default.json"));
  const ExperimentResult base = RunExperiment(c, Pipeline::kBaseline);
  const ExperimentResult scu = RunExperiment(c, Pipeline::kScu);
  const ExperimentResult mnf = RunExperiment(c, Pipeline::kMnf);
  EXPECT_GT(scu.accuracy, base.accuracy);
  EXPECT_GT(mnf.accuracy, base.accuracy);
  EXPECT_EQ(base.accuracy, base.report.total_recall);
  EXPECT_EQ(PipelineName(ParsePipeline("mnf")), "mnf");
  EXPECT_THROW(ParsePipeline("yolo"), ValidationError);
}

}  // namespace
}  // namespace ctxfuse
