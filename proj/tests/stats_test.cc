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

#include <algorithm>
#include <cmath>
#include <random>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "ctxfuse/stats.h"
#include "oracles.h"
#include "test_support.h"

namespace ctxfuse {
namespace {

using testing::DataPath;
using testing::ObjectLabels;
using testing::SceneLabels;

ImageRecord Image(std::string id, std::string scene,
                  std::vector<std::string> labels, Split split = Split::kTrain) {
  ImageRecord image{std::move(id), SceneLabel(std::move(scene)), split, {}, {}};
  double x = 0;
  for (auto& l : labels) {
    image.objects.push_back({ObjectLabel(std::move(l)), {x, 0, 5, 5}});
    x += 10;
  }
  return image;
}

Dataset TwoScene() {
  return Dataset::Create(ObjectLabels({"x", "y"}), SceneLabels({"A", "B"}),
                         {Image("1", "A", {"x", "x", "y"}), Image("2", "B", {"y"})});
}

double Round3(double v) { return std::round(v * 1000.0) / 1000.0; }

const Dataset& Groceries() {
  static const Dataset d = LoadManifest(DataPath("occluded_groceries.json"));
  return d;
}

TEST(ComputeTableTest, HandCountedTwoSceneExample) {
  const CooccurrenceTable t = ComputeTable(TwoScene(), SplitSelector::kAll);
  EXPECT_DOUBLE_EQ(t.cond(0, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.cond(1, 0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.cond(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(t.cond(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(t.scene_prior(0), 0.5);
  EXPECT_DOUBLE_EQ(t.scene_prior(1), 0.5);
  EXPECT_DOUBLE_EQ(t.object_prior(0), 0.5);
  EXPECT_DOUBLE_EQ(t.object_prior(1), 0.5);
  EXPECT_EQ(t.detection_count(), 4u);
  EXPECT_EQ(t.image_count(), 2u);
}

TEST(ComputeTableTest, EmptySplitGivesZeroTable) {
  const CooccurrenceTable t = ComputeTable(TwoScene(), SplitSelector::kTest);
  EXPECT_EQ(t.detection_count(), 0u);
  EXPECT_EQ(t.image_count(), 0u);
  for (std::size_t o = 0; o < 2; ++o) {
    EXPECT_EQ(t.object_prior(o), 0.0);
    for (std::size_t s = 0; s < 2; ++s) EXPECT_EQ(t.cond(o, s), 0.0);
  }
  EXPECT_EQ(t.scene_prior(0), 0.0);
}

TEST(ComputeTableTest, SceneWithoutDetectionsHasZeroColumn) {
  const Dataset d = Dataset::Create(ObjectLabels({"x"}), SceneLabels({"A", "B"}),
                                    {Image("1", "A", {"x"}), Image("2", "B", {})});
  const CooccurrenceTable t = ComputeTable(d, SplitSelector::kAll);
  EXPECT_EQ(t.per_scene_detection_count(1), 0u);
  EXPECT_EQ(t.cond(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(t.scene_prior(1), 0.5);
}

TEST(ComputeTableTest, GroceriesFixtureEntries) {
  const CooccurrenceTable t = ComputeTable(Groceries(), SplitSelector::kTrain);
  auto cond = [&](const char* o, const char* s) {
    return t.cond(*t.ObjectIndex(ObjectLabel(o)), *t.SceneIndex(SceneLabel(s)));
  };
  EXPECT_EQ(Round3(cond("Can Chowder", "Cupboard")), 0.206);
  EXPECT_EQ(Round3(cond("Carton Soymilk", "Refrigerator")), 0.238);
  EXPECT_EQ(cond("Carton OJ", "Cupboard"), 0.0);
}

TEST(ComputeTableTest, MatchesIndicatorOracleOnRandomDatasets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = testing::RandomDataset(rng);
    for (SplitSelector split :
         {SplitSelector::kTrain, SplitSelector::kTest, SplitSelector::kAll}) {
      const CooccurrenceTable t = ComputeTable(d, split);
      const testing::IndicatorTable ref = testing::CountByIndicators(d, split);
      ASSERT_EQ(t.detection_count(), ref.m);
      ASSERT_EQ(t.image_count(), ref.n);
      for (std::size_t o = 0; o < t.object_count(); ++o) {
        EXPECT_EQ(t.object_detection_count(o), ref.object_count[o]);
        for (std::size_t s = 0; s < t.scene_count(); ++s) {
          EXPECT_EQ(t.pair_count(o, s), ref.pair[o][s]);
          EXPECT_NEAR(t.cond(o, s), ref.Cond(o, s), 1e-12);
        }
      }
    }
  }
}

TEST(ComputeTableTest, InvariantsOnRandomDatasets) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = testing::RandomDataset(rng);
    const CooccurrenceTable t = ComputeTable(d, SplitSelector::kAll);
    Count per_scene_total = 0;
    for (std::size_t s = 0; s < t.scene_count(); ++s) {
      per_scene_total += t.per_scene_detection_count(s);
      if (t.per_scene_detection_count(s) == 0) continue;
      double sum = 0;
      for (std::size_t o = 0; o < t.object_count(); ++o) {
        EXPECT_GE(t.cond(o, s), 0.0);
        EXPECT_LE(t.cond(o, s), 1.0);
        sum += t.cond(o, s);
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    EXPECT_EQ(per_scene_total, t.detection_count());
    if (t.detection_count() > 0) {
      double prior_sum = 0;
      for (std::size_t o = 0; o < t.object_count(); ++o) {
        prior_sum += t.object_prior(o);
        double mixed = 0;
        for (std::size_t s = 0; s < t.scene_count(); ++s) {
          mixed += t.cond(o, s) *
                   static_cast<double>(t.per_scene_detection_count(s)) /
                   static_cast<double>(t.detection_count());
        }
        EXPECT_NEAR(t.object_prior(o), mixed, 1e-9);
      }
      EXPECT_NEAR(prior_sum, 1.0, 1e-9);
    }
    if (t.image_count() > 0) {
      double sum = 0;
      for (std::size_t s = 0; s < t.scene_count(); ++s) sum += t.scene_prior(s);
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(ComputeTableTest, ImageOrderDoesNotMatter) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = testing::RandomDataset(rng);
    std::vector<ImageRecord> shuffled = d.images();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Dataset p =
        Dataset::Create(d.object_classes(), d.scene_classes(), shuffled);
    EXPECT_EQ(ComputeTable(d, SplitSelector::kAll),
              ComputeTable(p, SplitSelector::kAll));
  }
}

Dataset SceneCounts() {
  return Dataset::Create(
      ObjectLabels({"x"}), SceneLabels({"A", "B"}),
      {Image("1", "A", {"x"}), Image("2", "A", {"x"}), Image("3", "A", {}),
       Image("4", "B", {"x"}), Image("5", "B", {"x"}, Split::kTest)});
}

TEST(FilterScenesTest, ThresholdBoundary) {
  const Dataset d = SceneCounts();
  const auto r = FilterScenes(ComputeTable(d, SplitSelector::kTrain), d, 2);
  EXPECT_EQ(r.retained, SceneLabels({"A"}));
  EXPECT_EQ(r.excluded, SceneLabels({"B"}));
  EXPECT_EQ(r.table.scenes(), SceneLabels({"A"}));
}

TEST(FilterScenesTest, AlphaOneKeepsEveryUsedScene) {
  const Dataset d = SceneCounts();
  const CooccurrenceTable t = ComputeTable(d, SplitSelector::kTrain);
  const auto r = FilterScenes(t, d, 1);
  EXPECT_EQ(r.retained, d.scene_classes());
  EXPECT_EQ(r.table, t);
}

TEST(FilterScenesTest, MarginalsAreNotRenormalised) {
  const Dataset d = SceneCounts();
  const CooccurrenceTable t = ComputeTable(d, SplitSelector::kTrain);
  const auto r = FilterScenes(t, d, 2);
  EXPECT_EQ(r.table.detection_count(), t.detection_count());
  EXPECT_EQ(r.table.image_count(), t.image_count());
  EXPECT_DOUBLE_EQ(r.table.scene_prior(0), t.scene_prior(0));
  EXPECT_DOUBLE_EQ(r.table.object_prior(0), t.object_prior(0));
}

TEST(FilterScenesTest, Errors) {
  const Dataset d = SceneCounts();
  const CooccurrenceTable t = ComputeTable(d, SplitSelector::kTrain);
  EXPECT_THROW(FilterScenes(t, d, 0), ValidationError);
  EXPECT_THROW(FilterScenes(t, d, 100), ValidationError);
}

TEST(FilterScenesTest, GroceriesKeepsAllScenesAtDefaultAlpha) {
  const auto r = FilterScenes(ComputeTable(Groceries(), SplitSelector::kTrain),
                              Groceries(), kDefaultAlpha);
  EXPECT_EQ(r.retained.size(), 3u);
  EXPECT_TRUE(r.excluded.empty());
}

TEST(ClusterKeyTest, GroceriesAssignments) {
  const SceneClusterKey key = ComputeClusterKey(Groceries(), SplitSelector::kTrain);
  auto assigned = [&](const char* name) {
    const auto it = std::find(key.objects.begin(), key.objects.end(), ObjectLabel(name));
    const auto o = static_cast<std::size_t>(it - key.objects.begin());
    return key.scenes[*key.assignment[o]].name();
  };
  EXPECT_EQ(assigned("Carton Soymilk"), "Refrigerator");
  EXPECT_EQ(assigned("Rice Tuscan"), "Counter");
  for (std::size_t o = 0; o < key.objects.size(); ++o) {
    double sum = 0;
    for (double v : key.likelihoods[o]) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ClusterKeyTest, SingleOccurrenceAndUnassigned) {
  const Dataset d = Dataset::Create(ObjectLabels({"seen", "unseen"}),
                                    SceneLabels({"A", "B"}),
                                    {Image("1", "B", {"seen"})});
  const SceneClusterKey key = ComputeClusterKey(d, SplitSelector::kAll);
  EXPECT_EQ(key.assignment[0], 1u);
  EXPECT_DOUBLE_EQ(key.likelihoods[0][1], 1.0);
  EXPECT_FALSE(key.assignment[1].has_value());
  EXPECT_EQ(key.ObjectOrder(), (std::vector<std::size_t>{0, 1}));
}

TEST(ClusterKeyTest, TiesGoToEarlierScene) {
  const Dataset d = Dataset::Create(ObjectLabels({"x"}), SceneLabels({"A", "B"}),
                                    {Image("1", "B", {"x"}), Image("2", "A", {"x"})});
  EXPECT_EQ(ComputeClusterKey(d, SplitSelector::kAll).assignment[0], 0u);
}

TEST(ClusterKeyTest, OrderGroupsBySceneThenDatasetOrder) {
  const Dataset d = Dataset::Create(
      ObjectLabels({"p", "q", "r", "s"}), SceneLabels({"A", "B"}),
      {Image("1", "B", {"p", "r"}), Image("2", "A", {"q", "s"})});
  EXPECT_EQ(ComputeClusterKey(d, SplitSelector::kAll).ObjectOrder(),
            (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(TableIoTest, RoundTripIsIdentity) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = testing::RandomDataset(rng);
    const CooccurrenceTable t = ComputeTable(d, SplitSelector::kAll);
    const std::string text = SerializeTable(t);
    const CooccurrenceTable back = ParseTable(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(SerializeTable(back), text);
  }
}

TEST(TableIoTest, FilteredTableRoundTrips) {
  const Dataset d = SceneCounts();
  const auto r = FilterScenes(ComputeTable(d, SplitSelector::kTrain), d, 2);
  EXPECT_EQ(ParseTable(SerializeTable(r.table)), r.table);
}

TEST(TableIoTest, GroceriesFileRoundTrips) {
  const CooccurrenceTable t = ComputeTable(Groceries(), SplitSelector::kTrain);
  const auto dir = testing::ScratchDir("table_io");
  SaveTable(t, dir / "t.json");
  EXPECT_EQ(LoadTable(dir / "t.json"), t);
}

TEST(TableIoTest, CsvMatchesTableLayout) {
  const std::string csv =
      TableToCsv(ComputeTable(Groceries(), SplitSelector::kTrain));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "object,Cupboard,Counter,Refrigerator");
  EXPECT_NE(csv.find("\nCan Tomatosoup,0.258,"), std::string::npos);
}

TEST(TableIoTest, ZeroTableCsv) {
  const std::string csv = TableToCsv(ComputeTable(TwoScene(), SplitSelector::kTest));
  EXPECT_EQ(csv, "object,A,B\nx,0.000,0.000\ny,0.000,0.000\n");
}

TEST(TableIoTest, RejectsMalformedTables) {
  EXPECT_THROW(ParseTable("[]"), ParseError);
  EXPECT_THROW(ParseTable(R"({"objects": ["x"]})"), ParseError);
}

}  // namespace
}  // namespace ctxfuse
