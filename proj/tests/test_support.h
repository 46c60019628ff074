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

// Shared helpers for the test binaries: fixture paths, scratch directories,
// in-process CLI runs and random dataset generation.

#ifndef CTXFUSE_TESTS_TEST_SUPPORT_H_
#define CTXFUSE_TESTS_TEST_SUPPORT_H_

#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctxfuse/types.h"

namespace ctxfuse::testing {

std::filesystem::path DataPath(const std::string& name);
std::filesystem::path SourcePath(const std::string& relative);

// Fresh, empty directory unique to this process and `name`.
std::filesystem::path ScratchDir(const std::string& name);

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun RunCli(std::vector<std::string> args);

struct RandomDatasetLimits {
  std::size_t max_images = 20;
  std::size_t max_scenes = 5;
  std::size_t max_objects = 8;
  std::size_t max_per_image = 4;
};

// Random vocabularies and images; every scene and object class exists but
// may be unused. Boxes sit on a grid so they never overlap.
Dataset RandomDataset(std::mt19937_64& rng, const RandomDatasetLimits& limits = {});

DetectionRecord MakeDetection(
    std::string image_id, BoundingBox box,
    std::vector<std::pair<std::string, double>> candidates);

std::vector<ObjectLabel> ObjectLabels(const std::vector<std::string>& names);
std::vector<SceneLabel> SceneLabels(const std::vector<std::string>& names);

}  // namespace ctxfuse::testing

#endif  // CTXFUSE_TESTS_TEST_SUPPORT_H_
