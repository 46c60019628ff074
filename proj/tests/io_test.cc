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

#include <random>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "test_support.h"

namespace ctxfuse {
namespace {

using testing::DataPath;
using testing::MakeDetection;
using testing::ScratchDir;

constexpr const char* kMinimalManifest = R"({
  "object_classes": ["A", "B"],
  "scene_classes": ["S"],
  "images": [{"image_id": "i1", "scene": "S", "split": "test",
              "objects": [{"label": "A", "bbox": [0, 0, 4, 4]}]}]
})";

Dataset Minimal() { return ParseManifest(kMinimalManifest); }

TEST(ManifestTest, MinimalManifestHasOneImageOneDetection) {
  const Dataset d = Minimal();
  EXPECT_EQ(d.ImageCount(SplitSelector::kAll), 1u);
  EXPECT_EQ(d.DetectionCount(SplitSelector::kAll), 1u);
}

TEST(ManifestTest, GroceriesFixtureHasTenObjectsThreeScenes) {
  const Dataset d = LoadManifest(DataPath("occluded_groceries.json"));
  EXPECT_EQ(d.object_classes().size(), 10u);
  ASSERT_EQ(d.scene_classes().size(), 3u);
  EXPECT_EQ(d.scene_classes()[0].name(), "Cupboard");
  EXPECT_EQ(d.scene_classes()[1].name(), "Counter");
  EXPECT_EQ(d.scene_classes()[2].name(), "Refrigerator");
}

TEST(ManifestTest, UnknownSceneIsNamed) {
  const std::string text = R"({"object_classes": ["A"], "scene_classes": ["S"],
    "images": [{"image_id": "x", "scene": "Garage", "split": "train", "objects": []}]})";
  try {
    ParseManifest(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Garage"), std::string::npos);
  }
}

TEST(ManifestTest, MalformedInputIsAParseError) {
  EXPECT_THROW(ParseManifest("{"), ParseError);
  EXPECT_THROW(ParseManifest(R"({"object_classes": []})"), ParseError);
  EXPECT_THROW(ParseManifest(R"({"object_classes": ["A"], "scene_classes": ["S"],
    "images": [{"image_id": "x", "scene": "S", "split": "train",
                "objects": [{"label": "A", "bbox": [0, 0, 4]}]}]})"),
               ParseError);
}

TEST(ManifestTest, NonPositiveBoxIsAValidationError) {
  EXPECT_THROW(ParseManifest(R"({"object_classes": ["A"], "scene_classes": ["S"],
    "images": [{"image_id": "x", "scene": "S", "split": "train",
                "objects": [{"label": "A", "bbox": [0, 0, 0, 4]}]}]})"),
               ValidationError);
}

TEST(ManifestTest, RoundTripsRandomDatasets) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Dataset d = testing::RandomDataset(rng);
    const std::string text = SerializeManifest(d);
    const Dataset back = ParseManifest(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(SerializeManifest(back), text);
  }
}

TEST(ManifestTest, KeepsSourcePath) {
  const Dataset d = ParseManifest(R"({"object_classes": ["A"], "scene_classes": ["S"],
    "images": [{"image_id": "x", "scene": "S", "split": "train",
                "source_path": "img/x.ppm", "objects": []}]})");
  ASSERT_TRUE(d.images()[0].source_path.has_value());
  EXPECT_EQ(*d.images()[0].source_path, "img/x.ppm");
  EXPECT_EQ(ParseManifest(SerializeManifest(d)), d);
}

TEST(DetectionsTest, CandidatesAreResorted) {
  const auto recs = ParseDetections(R"({"detections": [{"image_id": "i1",
    "bbox": [0, 0, 4, 4], "candidates": [{"label": "A", "score": 0.3},
                                         {"label": "B", "score": 0.9}]}]})",
                                    Minimal());
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].candidates[0], (Candidate{ObjectLabel("B"), 0.9}));
  EXPECT_EQ(recs[0].candidates[1], (Candidate{ObjectLabel("A"), 0.3}));
}

TEST(DetectionsTest, UnknownImageIsNamed) {
  try {
    ParseDetections(R"({"detections": [{"image_id": "ghost", "bbox": [0, 0, 1, 1],
      "candidates": [{"label": "A", "score": 0.5}]}]})",
                    Minimal());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
}

TEST(DetectionsTest, DuplicateCandidateIsRejected) {
  try {
    ParseDetections(R"({"detections": [{"image_id": "i1", "bbox": [0, 0, 1, 1],
      "candidates": [{"label": "A", "score": 0.5}, {"label": "A", "score": 0.2}]}]})",
                    Minimal());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate candidate"), std::string::npos);
  }
}

TEST(DetectionsTest, RejectsBadCandidates) {
  const Dataset d = Minimal();
  EXPECT_THROW(ParseDetections(R"({"detections": [{"image_id": "i1", "bbox": [0, 0, 1, 1],
      "candidates": []}]})", d), ValidationError);
  EXPECT_THROW(ParseDetections(R"({"detections": [{"image_id": "i1", "bbox": [0, 0, 1, 1],
      "candidates": [{"label": "Z", "score": 0.5}]}]})", d), ValidationError);
  EXPECT_THROW(ParseDetections(R"({"detections": [{"image_id": "i1", "bbox": [0, 0, 1, 1],
      "candidates": [{"label": "A", "score": 1.5}]}]})", d), ValidationError);
  EXPECT_THROW(ParseDetections(R"({"detections": [{"image_id": "i1", "bbox": [0, 0, 1, 1],
      "candidates": [{"label": "A", "score": -0.1}]}]})", d), ValidationError);
}

TEST(DetectionsTest, EmptyListRoundTrips) {
  const std::string text = SerializeDetections({});
  EXPECT_NE(text.find("\"detections\": []"), std::string::npos);
  EXPECT_TRUE(ParseDetections(text, Minimal()).empty());
}

TEST(DetectionsTest, SaveLoadIsIdentityAndByteStable) {
  std::vector<DetectionRecord> recs = {
      MakeDetection("i1", {0.5, 1.25, 3, 4}, {{"A", 0.123456789}, {"B", 0.5}}),
      MakeDetection("i1", {10, 10, 2, 2}, {{"B", 1.0}}),
  };
  recs[1].source = "Counter";
  const auto dir = ScratchDir("io_roundtrip");
  SaveDetections(recs, dir / "a.json");
  SaveDetections(recs, dir / "b.json");
  EXPECT_EQ(ReadTextFile(dir / "a.json"), ReadTextFile(dir / "b.json"));
  EXPECT_EQ(LoadDetections(dir / "a.json", Minimal()), recs);
}

TEST(DetectionsTest, KeyOrderIsFixed) {
  std::vector<DetectionRecord> recs = {
      MakeDetection("i1", {0, 0, 1, 1}, {{"A", 0.5}})};
  recs[0].source = "src";
  const std::string text = SerializeDetections(recs);
  const auto id = text.find("\"image_id\"");
  const auto bbox = text.find("\"bbox\"");
  const auto source = text.find("\"source\"");
  const auto cands = text.find("\"candidates\"");
  EXPECT_LT(id, bbox);
  EXPECT_LT(bbox, source);
  EXPECT_LT(source, cands);
}

TEST(QuantizeTest, KeepsNineSignificantDigits) {
  EXPECT_EQ(QuantizeForOutput(0.1234567891234), 0.123456789);
  EXPECT_EQ(QuantizeForOutput(0.5), 0.5);
  EXPECT_EQ(QuantizeForOutput(0.0), 0.0);
  EXPECT_EQ(QuantizeForOutput(123456789012.0), 123456789000.0);
}

TEST(FileTest, MissingFileIsAnIoError) {
  EXPECT_THROW(ReadTextFile("/nonexistent/ctxfuse/file.json"), IoError);
}

}  // namespace
}  // namespace ctxfuse
