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

#include "ctxfuse/image_io.h"

#include <cctype>
#include <string>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"

namespace ctxfuse {
namespace {

class PpmReader {
 public:
  PpmReader(const std::string& data, std::string origin)
      : data_(data), origin_(std::move(origin)) {}

  std::string Token() {
    SkipSpaceAndComments();
    std::string tok;
    while (pos_ < data_.size() &&
           !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      tok += data_[pos_++];
    }
    if (tok.empty()) Fail("unexpected end of file");
    return tok;
  }

  std::size_t Number() {
    const std::string tok = Token();
    std::size_t value = 0;
    for (char c : tok) {
      if (!std::isdigit(static_cast<unsigned char>(c))) Fail("bad number");
      value = value * 10 + static_cast<std::size_t>(c - '0');
      if (value > (1u << 24)) Fail("number out of range");
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from P6 data.
  void SkipSingleSpace() {
    if (pos_ >= data_.size() ||
        !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      Fail("missing separator before pixel data");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(origin_ + ": " + what);
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < data_.size()) {
      if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

RgbImage RgbImage::Solid(std::size_t width, std::size_t height,
                         std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.reserve(width * height * 3);
  for (std::size_t i = 0; i < width * height; ++i) {
    img.pixels.push_back(r);
    img.pixels.push_back(g);
    img.pixels.push_back(b);
  }
  return img;
}

RgbImage ReadPpm(const std::filesystem::path& path) {
  const std::string data = ReadTextFile(path);
  PpmReader reader(data, path.string());
  const std::string magic = reader.Token();
  if (magic != "P6" && magic != "P3") reader.Fail("not a P3/P6 PPM file");
  RgbImage img;
  img.width = reader.Number();
  img.height = reader.Number();
  const std::size_t maxval = reader.Number();
  if (img.width == 0 || img.height == 0) reader.Fail("empty image");
  if (maxval == 0 || maxval > 255) reader.Fail("unsupported maxval");
  const std::size_t count = img.width * img.height * 3;
  img.pixels.resize(count);
  const auto scale = [&](std::size_t v) {
    if (v > maxval) reader.Fail("sample exceeds maxval");
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (magic == "P6") {
    reader.SkipSingleSpace();
    if (data.size() - reader.pos() < count) reader.Fail("truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      img.pixels[i] =
          scale(static_cast<unsigned char>(data[reader.pos() + i]));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = scale(reader.Number());
  }
  return img;
}

void WritePpm(const RgbImage& image, const std::filesystem::path& path) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  WriteTextFile(path, out);
}

}  // namespace ctxfuse
