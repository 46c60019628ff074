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

// Manifest and detection file formats plus small file helpers.

#ifndef CTXFUSE_IO_H_
#define CTXFUSE_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxfuse/types.h"

namespace ctxfuse {

// Reads a whole file; throws IoError.
std::string ReadTextFile(const std::filesystem::path& path);
// Writes (truncating) a whole file, creating parent directories; IoError.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Rounds to at most 9 significant digits. Every float the library writes
// passes through this, so output bytes are stable and reloading an already
// quantized value is exact.
double QuantizeForOutput(double value);

// Manifest: {"object_classes", "scene_classes", "images": [...]}.
Dataset ParseManifest(std::string_view json_text,
                      std::string_view origin = "<memory>");
Dataset LoadManifest(const std::filesystem::path& path);
std::string SerializeManifest(const Dataset& dataset);
void SaveManifest(const Dataset& dataset, const std::filesystem::path& path);

// Detections: {"detections": [{"image_id", "bbox", "source"?, "candidates"}]}.
// Candidates are validated (known label, score in [0, 1], no duplicates,
// non-empty) and re-sorted into canonical order. The Dataset overloads also
// reject unknown image ids; the label-only overloads accept any image id.
std::vector<DetectionRecord> ParseDetections(
    std::string_view json_text, const Dataset& dataset,
    std::string_view origin = "<memory>");
std::vector<DetectionRecord> ParseDetections(
    std::string_view json_text, std::span<const ObjectLabel> objects,
    std::string_view origin = "<memory>");
std::vector<DetectionRecord> LoadDetections(const std::filesystem::path& path,
                                            const Dataset& dataset);
std::vector<DetectionRecord> LoadDetections(
    const std::filesystem::path& path, std::span<const ObjectLabel> objects);
std::string SerializeDetections(std::span<const DetectionRecord> records);
void SaveDetections(std::span<const DetectionRecord> records,
                    const std::filesystem::path& path);

}  // namespace ctxfuse

#endif  // CTXFUSE_IO_H_
