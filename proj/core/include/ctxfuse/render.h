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

// Report artifacts: JSON, CSV, aligned text, markdown and the log-scale
// confusion heatmap. All output is byte-deterministic for a given report.

#ifndef CTXFUSE_RENDER_H_
#define CTXFUSE_RENDER_H_

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxfuse/eval.h"

namespace ctxfuse {

std::string ReportJson(const EvalReport& report);
// object,precision,recall,tp,fp,fn rows plus a Total row.
std::string ReportCsv(const EvalReport& report);
// Object / Pr. / Re. columns with percentages, Total row last.
std::string ReportText(const EvalReport& report);
std::string ConfusionCsv(const EvalReport& report);
std::string PrCurveCsv(const EvalReport& report);

// Heatmap over the confusion matrix. A cell's colour is
// log(1 + count) / log(1 + max count) on a purple-to-yellow ramp; zero
// cells are black. Lines separate the scene groups.
std::string ConfusionSvg(const EvalReport& report);

// The colour ramp used by ConfusionSvg, as "#rrggbb".
std::string HeatmapColor(std::size_t count, std::size_t max_count);

// Writes report.json, report.csv, report.txt, confusion.csv, confusion.svg
// and pr_curve.csv into out_dir.
void WriteEvalOutputs(const EvalReport& report,
                      const std::filesystem::path& out_dir);

// Side-by-side Pr./Re. table for several named runs (first is the baseline).
std::string ComparisonMarkdown(
    std::span<const std::pair<std::string, EvalReport>> runs);

}  // namespace ctxfuse

#endif  // CTXFUSE_RENDER_H_
