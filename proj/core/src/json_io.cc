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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctxfuse/errors.h"
#include "ctxfuse/io.h"
#include "json_util.h"

namespace ctxfuse {

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return std::move(buffer).str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " +
                    path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

double QuantizeForOutput(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 9);
  double out = 0;
  std::from_chars(buf, res.ptr, out);
  return out == 0 ? 0.0 : out;  // drop negative zero
}

namespace internal {

Json ParseJsonText(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(origin) + ": " + e.what());
  }
}

Json ParseJsonFile(const std::filesystem::path& path) {
  return ParseJsonText(ReadTextFile(path), path.string());
}

std::string DumpJson(const Json& value) { return value.dump(2) + "\n"; }

Json Number(double value) { return Json(QuantizeForOutput(value)); }

bool HasField(const Json& object, std::string_view key) {
  return object.is_object() && object.contains(key);
}

const Json& Field(const Json& object, std::string_view key,
                  std::string_view context) {
  if (!object.is_object()) {
    throw ParseError(std::string(context) + ": expected a JSON object");
  }
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(std::string(context) + ": missing field \"" +
                     std::string(key) + "\"");
  }
  return *it;
}

std::string GetString(const Json& value, std::string_view context) {
  if (!value.is_string()) {
    throw ParseError(std::string(context) + ": expected a string");
  }
  return value.get<std::string>();
}

double GetNumber(const Json& value, std::string_view context) {
  if (!value.is_number()) {
    throw ParseError(std::string(context) + ": expected a number");
  }
  return value.get<double>();
}

std::int64_t GetInteger(const Json& value, std::string_view context) {
  if (!value.is_number_integer()) {
    throw ParseError(std::string(context) + ": expected an integer");
  }
  return value.get<std::int64_t>();
}

const Json& GetArray(const Json& value, std::string_view context) {
  if (!value.is_array()) {
    throw ParseError(std::string(context) + ": expected an array");
  }
  return value;
}

const Json& GetObject(const Json& value, std::string_view context) {
  if (!value.is_object()) {
    throw ParseError(std::string(context) + ": expected an object");
  }
  return value;
}

std::vector<std::string> GetStringArray(const Json& value,
                                        std::string_view context) {
  std::vector<std::string> out;
  for (const auto& item : GetArray(value, context)) {
    out.push_back(GetString(item, context));
  }
  return out;
}

std::vector<double> GetNumberArray(const Json& value,
                                   std::string_view context) {
  std::vector<double> out;
  for (const auto& item : GetArray(value, context)) {
    out.push_back(GetNumber(item, context));
  }
  return out;
}

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace internal
}  // namespace ctxfuse
