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

#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ctxfuse/errors.h"
#include "ctxfuse/eval.h"
#include "ctxfuse/io.h"
#include "ctxfuse/mnf.h"
#include "ctxfuse/render.h"
#include "ctxfuse/scene_provider.h"
#include "ctxfuse/scu.h"
#include "ctxfuse/sim.h"
#include "ctxfuse/stats.h"

namespace ctxfuse::cli {
namespace {

namespace fs = std::filesystem;

// "-" sends the payload to standard output.
void Emit(const std::string& target, const std::string& text,
          std::ostream& out) {
  if (target == "-") {
    out << text;
  } else {
    WriteTextFile(target, text);
  }
}

// Listed in --help through the IsMember validators.
const std::vector<std::string> kSplitChoices = {"train", "test", "all"};

struct StatsArgs {
  std::string manifest, split = "train", out, csv, cluster_key;
  std::optional<int> alpha;
};

struct ScuArgs {
  std::string detections, scenes, cooc, out, audit;
  double score_floor = ScuOptions{}.score_floor;
  double smoothing = 0.0;
};

struct PartitionArgs {
  std::string manifest, out_dir;
  int alpha = kDefaultAlpha;
};

struct RouteArgs {
  std::string manifest, registry, scene_mode = "ground_truth", scene_file,
      image_root, on_missing = "fallback", out, summary;
  bool no_source_tag = false;
};

struct EvalArgs {
  std::string manifest, pred, out_dir, split = "test", cluster_split = "all";
  double iou = kDefaultIouThreshold;
  std::vector<double> thresholds;
};

struct SceneFitArgs {
  std::string manifest, split = "train", image_root, out;
  int bins = 8;
};

struct ScenePredictArgs {
  std::string manifest, classifier, image_root, split = "test", out;
};

struct SimulateArgs {
  std::string config, out_dir;
  std::vector<std::string> pipelines = {"baseline", "scu", "mnf"};
  bool predicted_scenes = false;
  bool exact_table = false;
  int alpha = 1;
};

struct ReportArgs {
  std::string manifest, out_dir, split = "test", cluster_split = "all";
  std::vector<std::string> preds;
  double iou = kDefaultIouThreshold;
};

void RunStats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset dataset = LoadManifest(a.manifest);
  CooccurrenceTable table = ComputeTable(dataset, ParseSplitSelector(a.split));
  if (a.alpha) {
    SceneFilterResult filtered = FilterScenes(table, dataset, *a.alpha);
    for (const auto& s : filtered.excluded) {
      err << "scene \"" << s.name() << "\" has fewer than " << *a.alpha
          << " train images; excluded\n";
    }
    table = std::move(filtered.table);
  }
  Emit(a.out, SerializeTable(table), out);
  if (!a.csv.empty()) Emit(a.csv, TableToCsv(table), out);
  if (!a.cluster_key.empty()) {
    Emit(a.cluster_key,
         SerializeClusterKey(
             ComputeClusterKey(dataset, ParseSplitSelector(a.split))),
         out);
  }
}

void RunScu(const ScuArgs& a, std::ostream& out, std::ostream& err) {
  const CooccurrenceTable table = LoadTable(a.cooc);
  const auto detections = LoadDetections(a.detections, table.objects());
  const auto scenes = LoadScenePredictions(a.scenes, table.scenes());
  ScuOptions options;
  options.score_floor = a.score_floor;
  options.smoothing_lambda = a.smoothing;
  const ScuBatchResult batch =
      ScuUpdateBatch(detections, scenes, table, options);
  Emit(a.out, SerializeDetections(FusedDetections(batch.results, detections)),
       out);
  if (!a.audit.empty()) Emit(a.audit, SerializeAudit(batch), out);
  err << batch.results.size() << " detections, " << batch.changed
      << " relabelled, " << batch.fallback << " fell back\n";
}

void RunPartition(const PartitionArgs& a, std::ostream& err) {
  const Dataset dataset = LoadManifest(a.manifest);
  const PartitionSpec spec = PartitionTrain(dataset, a.alpha, a.out_dir);
  for (const auto& [scene, images] : spec.excluded) {
    err << "scene \"" << scene.name() << "\" excluded (" << images
        << " train images)\n";
  }
}

void RunRoute(const RouteArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset dataset = LoadManifest(a.manifest);
  SceneProviderConfig config;
  config.mode = ParseSceneMode(a.scene_mode);
  if (!a.scene_file.empty()) config.file_path = a.scene_file;
  config.image_root = a.image_root;
  const SceneProvider provider = SceneProvider::Create(config, dataset);
  const SceneNetRegistry registry = SceneNetRegistry::Load(a.registry, dataset);

  RouteOptions options;
  if (a.on_missing == "error") {
    options.missing_scene = MissingScenePolicy::kError;
  } else if (a.on_missing != "fallback") {
    throw ValidationError("--on-missing must be fallback or error");
  }
  options.tag_source = !a.no_source_tag;
  const MnfResult result = RunMnf(dataset, provider, registry, options);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  Emit(a.out, SerializeDetections(result.records), out);
  if (!a.summary.empty()) Emit(a.summary, SerializeMnfSummary(result), out);
}

EvalReport EvaluateFile(const Dataset& dataset, const std::string& pred,
                        double iou, const std::string& split,
                        const std::string& cluster_split,
                        const std::vector<double>& thresholds) {
  const auto predictions = LoadDetections(pred, dataset.object_classes());
  EvalOptions options;
  options.iou_threshold = iou;
  options.split = ParseSplitSelector(split);
  const SceneClusterKey key =
      ComputeClusterKey(dataset, ParseSplitSelector(cluster_split));
  const std::vector<double> grid =
      thresholds.empty() ? DefaultThresholds() : thresholds;
  return Evaluate(dataset, predictions, key, options, grid);
}

void RunEval(const EvalArgs& a, std::ostream& err) {
  const Dataset dataset = LoadManifest(a.manifest);
  const EvalReport report = EvaluateFile(dataset, a.pred, a.iou, a.split,
                                         a.cluster_split, a.thresholds);
  if (report.ignored_predictions > 0) {
    err << "warning: " << report.ignored_predictions
        << " predictions refer to images outside the evaluated split\n";
  }
  WriteEvalOutputs(report, a.out_dir);
}

void RunSceneFit(const SceneFitArgs& a, std::ostream& out) {
  const Dataset dataset = LoadManifest(a.manifest);
  const HistogramClassifier classifier = HistogramClassifier::Fit(
      dataset, ParseSplitSelector(a.split), a.bins, a.image_root);
  Emit(a.out, classifier.Serialize(), out);
}

void RunScenePredict(const ScenePredictArgs& a, std::ostream& out) {
  const Dataset dataset = LoadManifest(a.manifest);
  const SceneProvider provider = SceneProvider::FromClassifier(
      HistogramClassifier::Load(a.classifier), dataset, a.image_root);
  const SplitSelector split = ParseSplitSelector(a.split);
  std::vector<ScenePrediction> predictions;
  for (const auto& image : dataset.images()) {
    if (Selects(split, image.split)) {
      predictions.push_back(provider.Identify(image));
    }
  }
  Emit(a.out, SerializeScenePredictions(predictions), out);
}

void RunSimulate(const SimulateArgs& a, std::ostream& err) {
  const SimConfig config = LoadSimConfig(a.config);
  const fs::path dir = a.out_dir;
  WriteSimOutputs(Generate(config), config, dir);

  ExperimentOptions options;
  options.ground_truth_scenes = !a.predicted_scenes;
  options.exact_table = a.exact_table;
  options.alpha = a.alpha;
  std::vector<std::pair<std::string, EvalReport>> runs;
  for (const auto& name : a.pipelines) {
    const Pipeline pipeline = ParsePipeline(name);
    ExperimentResult result = RunExperiment(config, pipeline, options);
    const std::string label(PipelineName(pipeline));
    SaveDetections(result.predictions, dir / label / "predictions.json");
    WriteEvalOutputs(result.report, dir / label);
    char line[96];
    std::snprintf(line, sizeof line, "%s accuracy %.4f\n", label.c_str(),
                  result.accuracy);
    err << line;
    runs.emplace_back(label, std::move(result.report));
  }
  if (!runs.empty()) WriteTextFile(dir / "summary.md", ComparisonMarkdown(runs));
}

void RunReport(const ReportArgs& a) {
  const Dataset dataset = LoadManifest(a.manifest);
  const fs::path dir = a.out_dir;
  std::vector<std::pair<std::string, EvalReport>> runs;
  for (const auto& spec : a.preds) {
    const auto eq = spec.find('=');
    std::string name, path;
    if (eq == std::string::npos) {
      path = spec;
      name = fs::path(spec).stem().string();
    } else {
      name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    }
    if (name.empty() || path.empty()) {
      throw ValidationError("--pred expects name=path, got \"" + spec + "\"");
    }
    for (const auto& [seen, unused] : runs) {
      if (seen == name) {
        throw ValidationError("duplicate --pred name \"" + name + "\"");
      }
    }
    EvalReport report =
        EvaluateFile(dataset, path, a.iou, a.split, a.cluster_split, {});
    WriteEvalOutputs(report, dir / name);
    runs.emplace_back(name, std::move(report));
  }
  WriteTextFile(dir / "summary.md", ComparisonMarkdown(runs));
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Scene-context fusion for object detections."};
  app.name("ctxfuse");
  app.require_subcommand(1);

  const auto splits = CLI::IsMember(kSplitChoices);

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Count the object/scene co-occurrence table");
  s->add_option("--manifest", stats.manifest, "Dataset manifest")->required();
  s->add_option("--split", stats.split, "Images to count")
      ->capture_default_str()->check(splits);
  s->add_option("--alpha", stats.alpha,
                "Drop scenes with fewer train images (default: keep all)");
  s->add_option("--out", stats.out, "Table JSON, or - for stdout")->required();
  s->add_option("--csv", stats.csv, "Also write the table as CSV");
  s->add_option("--cluster-key", stats.cluster_key,
                "Also write the per-object scene assignment");

  ScuArgs scu;
  auto* u = app.add_subcommand("scu", "Rescore detections with the scene prior");
  u->add_option("--detections", scu.detections, "Detections JSON")->required();
  u->add_option("--scenes", scu.scenes, "Scene predictions JSON")->required();
  u->add_option("--cooc", scu.cooc, "Co-occurrence table JSON")->required();
  u->add_option("--out", scu.out, "Rescored detections, or - for stdout")
      ->required();
  u->add_option("--audit", scu.audit, "Per-detection audit JSON");
  u->add_option("--score-floor", scu.score_floor,
                "Ignore candidates scoring below this")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  u->add_option("--smoothing", scu.smoothing,
                "Additive smoothing of P(o|s); 0 disables")
      ->capture_default_str()->check(CLI::NonNegativeNumber);

  PartitionArgs part;
  auto* p = app.add_subcommand("mnf-partition",
                               "Write one train manifest per frequent scene");
  p->add_option("--manifest", part.manifest, "Dataset manifest")->required();
  p->add_option("--alpha", part.alpha, "Minimum train images per scene")
      ->capture_default_str()->check(CLI::PositiveNumber);
  p->add_option("--out-dir", part.out_dir, "Output directory")->required();

  RouteArgs route;
  auto* r = app.add_subcommand("mnf-route",
                               "Route test images to per-scene detections");
  r->add_option("--manifest", route.manifest, "Dataset manifest")->required();
  r->add_option("--registry", route.registry, "Scene-to-detections registry")
      ->required();
  r->add_option("--scene-mode", route.scene_mode, "How scenes are identified")
      ->capture_default_str()
      ->check(CLI::IsMember({"ground_truth", "file", "histogram"}));
  r->add_option("--scene-file", route.scene_file,
                "Scene predictions (file mode) or classifier (histogram mode)");
  r->add_option("--image-root", route.image_root,
                "Base directory for image source paths");
  r->add_option("--on-missing", route.on_missing,
                "Scene without a registered source")
      ->capture_default_str()->check(CLI::IsMember({"fallback", "error"}));
  r->add_flag("--no-source-tag", route.no_source_tag,
              "Do not stamp records with the source that produced them");
  r->add_option("--out", route.out, "Routed detections, or - for stdout")
      ->required();
  r->add_option("--summary", route.summary, "Routing summary JSON");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Match predictions to ground truth and score");
  e->add_option("--manifest", eval.manifest, "Dataset manifest")->required();
  e->add_option("--pred", eval.pred, "Predicted detections")->required();
  e->add_option("--iou", eval.iou, "IoU needed for a match")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  e->add_option("--thresholds", eval.thresholds,
                "Comma-separated score thresholds, non-increasing "
                "(default: 0.95 down to 0.00 in steps of 0.05)")
      ->delimiter(',');
  e->add_option("--split", eval.split, "Images to evaluate")
      ->capture_default_str()->check(splits);
  e->add_option("--cluster-split", eval.cluster_split,
                "Images used to group confusion rows by scene")
      ->capture_default_str()->check(splits);
  e->add_option("--out-dir", eval.out_dir, "Report directory")->required();

  SceneFitArgs fit;
  auto* f = app.add_subcommand("scene-fit", "Fit the colour-histogram scene classifier");
  f->add_option("--manifest", fit.manifest, "Dataset manifest")->required();
  f->add_option("--split", fit.split, "Images to fit on")
      ->capture_default_str()->check(splits);
  f->add_option("--bins", fit.bins, "Histogram bins per channel")
      ->capture_default_str()->check(CLI::Range(1, 64));
  f->add_option("--image-root", fit.image_root,
                "Base directory for image source paths");
  f->add_option("--out", fit.out, "Classifier JSON, or - for stdout")->required();

  ScenePredictArgs pred;
  auto* sp = app.add_subcommand("scene-predict",
                                "Predict scenes with a fitted classifier");
  sp->add_option("--manifest", pred.manifest, "Dataset manifest")->required();
  sp->add_option("--classifier", pred.classifier, "Classifier JSON")->required();
  sp->add_option("--image-root", pred.image_root,
                 "Base directory for image source paths");
  sp->add_option("--split", pred.split, "Images to classify")
      ->capture_default_str()->check(splits);
  sp->add_option("--out", pred.out, "Scene predictions, or - for stdout")
      ->required();

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate",
                                "Generate a synthetic dataset and run pipelines");
  sm->add_option("--config", sim.config, "Simulation config JSON")->required();
  sm->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  sm->add_option("--pipeline", sim.pipelines, "Pipelines to evaluate")
      ->capture_default_str()->delimiter(',')
      ->check(CLI::IsMember({"baseline", "scu", "mnf"}));
  sm->add_flag("--predicted-scenes", sim.predicted_scenes,
               "Use simulated scene predictions instead of ground truth");
  sm->add_flag("--exact-table", sim.exact_table,
               "Give SCU the config's P(o|s) instead of train-split counts");
  sm->add_option("--alpha", sim.alpha, "MNF scene filter")
      ->capture_default_str()->check(CLI::PositiveNumber);

  ReportArgs report;
  auto* rp = app.add_subcommand("report",
                                "Evaluate several prediction files side by side");
  rp->add_option("--manifest", report.manifest, "Dataset manifest")->required();
  rp->add_option("--pred", report.preds,
                 "name=path; repeat, the first run is the reference")
      ->required();
  rp->add_option("--iou", report.iou, "IoU needed for a match")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  rp->add_option("--split", report.split, "Images to evaluate")
      ->capture_default_str()->check(splits);
  rp->add_option("--cluster-split", report.cluster_split,
                 "Images used to group confusion rows by scene")
      ->capture_default_str()->check(splits);
  rp->add_option("--out-dir", report.out_dir, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s) RunStats(stats, out, err);
    else if (*u) RunScu(scu, out, err);
    else if (*p) RunPartition(part, err);
    else if (*r) RunRoute(route, out, err);
    else if (*e) RunEval(eval, err);
    else if (*f) RunSceneFit(fit, out);
    else if (*sp) RunScenePredict(pred, out);
    else if (*sm) RunSimulate(sim, err);
    else if (*rp) RunReport(report);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ctxfuse::cli
