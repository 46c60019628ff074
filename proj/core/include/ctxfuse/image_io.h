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

// Minimal RGB raster plus PPM (P3/P6) reading and writing.

#ifndef CTXFUSE_IMAGE_IO_H_
#define CTXFUSE_IMAGE_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace ctxfuse {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, interleaved RGB

  static RgbImage Solid(std::size_t width, std::size_t height, std::uint8_t r,
                        std::uint8_t g, std::uint8_t b);
};

// Accepts binary (P6) and ASCII (P3) PPM with maxval <= 255. Throws IoError
// if the file cannot be opened and ParseError on a malformed header/body.
RgbImage ReadPpm(const std::filesystem::path& path);
// Writes binary P6.
void WritePpm(const RgbImage& image, const std::filesystem::path& path);

}  // namespace ctxfuse

#endif  // CTXFUSE_IMAGE_IO_H_
