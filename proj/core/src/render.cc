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

#include "ctxfuse/render.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "json_util.h"

namespace ctxfuse {
namespace {

using internal::CsvField;
using internal::Fixed;
using internal::Json;

std::string Percent(double v) { return Fixed(100.0 * v, 1) + "%"; }

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string PadRight(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string PadLeft(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

struct Rgb {
  double r, g, b;
};

// Viridis control points, purple through yellow.
constexpr std::array<Rgb, 5> kRamp = {{{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}}};

std::string Hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(c.r)),
                static_cast<int>(std::lround(c.g)),
                static_cast<int>(std::lround(c.b)));
  return buf;
}

}  // namespace

std::string ReportJson(const EvalReport& report) {
  Json root = Json::object();
  root["iou_threshold"] = internal::Number(report.iou_threshold);
  Json per_class = Json::array();
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& m = report.per_class[i];
    Json item = Json::object();
    item["object"] = report.classes[i].name();
    item["precision"] = internal::Number(m.precision);
    item["recall"] = internal::Number(m.recall);
    item["tp"] = m.tp;
    item["fp"] = m.fp;
    item["fn"] = m.fn;
    per_class.push_back(std::move(item));
  }
  root["per_class"] = std::move(per_class);
  Json total = Json::object();
  total["precision"] = internal::Number(report.total_precision);
  total["recall"] = internal::Number(report.total_recall);
  total["tp"] = report.tp;
  total["fp"] = report.fp;
  total["fn"] = report.fn;
  root["total"] = std::move(total);
  Json confusion = Json::object();
  confusion["labels"] = report.confusion_labels;
  confusion["groups"] = report.confusion_groups;
  confusion["matrix"] = report.confusion;
  root["confusion"] = std::move(confusion);
  Json curve = Json::array();
  for (const auto& p : report.pr_curve) {
    Json item = Json::object();
    item["threshold"] = internal::Number(p.threshold);
    item["precision"] = internal::Number(p.precision);
    item["recall"] = internal::Number(p.recall);
    curve.push_back(std::move(item));
  }
  root["pr_curve"] = std::move(curve);
  root["ignored_predictions"] = report.ignored_predictions;
  return internal::DumpJson(root);
}

std::string ReportCsv(const EvalReport& report) {
  std::string out = "object,precision,recall,tp,fp,fn\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& m = report.per_class[i];
    out += CsvField(report.classes[i].name()) + "," + Fixed(m.precision, 4) +
           "," + Fixed(m.recall, 4) + "," + std::to_string(m.tp) + "," +
           std::to_string(m.fp) + "," + std::to_string(m.fn) + "\n";
  }
  out += "Total," + Fixed(report.total_precision, 4) + "," +
         Fixed(report.total_recall, 4) + "," + std::to_string(report.tp) +
         "," + std::to_string(report.fp) + "," + std::to_string(report.fn) +
         "\n";
  return out;
}

std::string ReportText(const EvalReport& report) {
  std::size_t width = std::string("Object").size();
  for (const auto& c : report.classes) width = std::max(width, c.name().size());
  width += 2;
  std::string out = PadRight("Object", width) + PadLeft("Pr.", 8) +
                    PadLeft("Re.", 8) + "\n";
  out += std::string(width + 16, '-') + "\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    out += PadRight(report.classes[i].name(), width) +
           PadLeft(Percent(report.per_class[i].precision), 8) +
           PadLeft(Percent(report.per_class[i].recall), 8) + "\n";
  }
  out += std::string(width + 16, '-') + "\n";
  out += PadRight("Total", width) + PadLeft(Percent(report.total_precision), 8) +
         PadLeft(Percent(report.total_recall), 8) + "\n";
  return out;
}

std::string ConfusionCsv(const EvalReport& report) {
  std::string out = "true\\predicted";
  for (const auto& l : report.confusion_labels) out += "," + CsvField(l);
  out += "\n";
  for (std::size_t r = 0; r < report.confusion.size(); ++r) {
    out += CsvField(report.confusion_labels[r]);
    for (std::size_t v : report.confusion[r]) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

std::string PrCurveCsv(const EvalReport& report) {
  std::string out = "threshold,precision,recall\n";
  for (const auto& p : report.pr_curve) {
    out += Fixed(p.threshold, 4) + "," + Fixed(p.precision, 6) + "," +
           Fixed(p.recall, 6) + "\n";
  }
  return out;
}

std::string HeatmapColor(std::size_t count, std::size_t max_count) {
  if (count == 0 || max_count == 0) return "#000000";
  const double t = std::log1p(static_cast<double>(count)) /
                   std::log1p(static_cast<double>(max_count));
  const double pos = std::clamp(t, 0.0, 1.0) * (kRamp.size() - 1);
  const std::size_t lo = std::min<std::size_t>(
      static_cast<std::size_t>(pos), kRamp.size() - 2);
  const double f = pos - static_cast<double>(lo);
  const Rgb& a = kRamp[lo];
  const Rgb& b = kRamp[lo + 1];
  return Hex(Rgb{a.r + f * (b.r - a.r), a.g + f * (b.g - a.g),
                 a.b + f * (b.b - a.b)});
}

std::string ConfusionSvg(const EvalReport& report) {
  constexpr int kCell = 24;
  constexpr int kMargin = 170;
  const int n = static_cast<int>(report.confusion.size());
  const int size = kMargin + n * kCell + 10;
  std::size_t max_count = 0;
  for (const auto& row : report.confusion) {
    for (std::size_t v : row) max_count = std::max(max_count, v);
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(size) + "\" height=\"" + std::to_string(size) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (int i = 0; i < n; ++i) {
    const std::string label = XmlEscape(report.confusion_labels[i]);
    const int center = kMargin + i * kCell + kCell / 2;
    out += "<text x=\"" + std::to_string(kMargin - 6) + "\" y=\"" +
           std::to_string(center + 4) + "\" text-anchor=\"end\">" + label +
           "</text>\n";
    out += "<text transform=\"translate(" + std::to_string(center + 4) + "," +
           std::to_string(kMargin - 6) + ") rotate(-90)\">" + label +
           "</text>\n";
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t v = report.confusion[r][c];
      out += "<rect x=\"" + std::to_string(kMargin + c * kCell) + "\" y=\"" +
             std::to_string(kMargin + r * kCell) + "\" width=\"" +
             std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) +
             "\" fill=\"" + HeatmapColor(v, max_count) + "\"><title>" +
             XmlEscape(report.confusion_labels[r]) + " / " +
             XmlEscape(report.confusion_labels[c]) + ": " +
             std::to_string(v) + "</title></rect>\n";
    }
  }
  // Scene-group separators.
  for (int i = 1; i < n; ++i) {
    if (report.confusion_groups[i] == report.confusion_groups[i - 1]) continue;
    const std::string p = std::to_string(kMargin + i * kCell);
    const std::string lo = std::to_string(kMargin);
    const std::string hi = std::to_string(kMargin + n * kCell);
    out += "<line x1=\"" + lo + "\" y1=\"" + p + "\" x2=\"" + hi + "\" y2=\"" +
           p + "\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n";
    out += "<line x1=\"" + p + "\" y1=\"" + lo + "\" x2=\"" + p + "\" y2=\"" +
           hi + "\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void WriteEvalOutputs(const EvalReport& report,
                      const std::filesystem::path& out_dir) {
  WriteTextFile(out_dir / "report.json", ReportJson(report));
  WriteTextFile(out_dir / "report.csv", ReportCsv(report));
  WriteTextFile(out_dir / "report.txt", ReportText(report));
  WriteTextFile(out_dir / "confusion.csv", ConfusionCsv(report));
  WriteTextFile(out_dir / "confusion.svg", ConfusionSvg(report));
  WriteTextFile(out_dir / "pr_curve.csv", PrCurveCsv(report));
}

std::string ComparisonMarkdown(
    std::span<const std::pair<std::string, EvalReport>> runs) {
  if (runs.empty()) throw ValidationError("no runs to compare");
  const auto& classes = runs.front().second.classes;
  for (const auto& [name, r] : runs) {
    if (r.classes != classes) {
      throw ValidationError("run \"" + name + "\" has a different class list");
    }
  }
  std::string out = "| Object |";
  std::string rule = "|---|";
  for (const auto& [name, r] : runs) {
    out += " " + name + " Pr. | " + name + " Re. |";
    rule += "---:|---:|";
  }
  out += "\n" + rule + "\n";
  // Changes against the first run are marked with + or -.
  const auto cell = [&](double v, double base, bool is_base) {
    std::string s = Percent(v);
    if (!is_base && v > base) s += " (+)";
    if (!is_base && v < base) s += " (-)";
    return s;
  };
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out += "| " + classes[i].name() + " |";
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto& m = runs[k].second.per_class[i];
      const auto& b = runs[0].second.per_class[i];
      out += " " + cell(m.precision, b.precision, k == 0) + " | " +
             cell(m.recall, b.recall, k == 0) + " |";
    }
    out += "\n";
  }
  out += "| **Total** |";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k].second;
    const auto& b = runs[0].second;
    out += " " + cell(r.total_precision, b.total_precision, k == 0) + " | " +
           cell(r.total_recall, b.total_recall, k == 0) + " |";
  }
  out += "\n";
  return out;
}

}  // namespace ctxfuse
