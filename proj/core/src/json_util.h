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

// JSON helpers shared by the file-format implementations. Not installed.

#ifndef CTXFUSE_SRC_JSON_UTIL_H_
#define CTXFUSE_SRC_JSON_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ctxfuse::internal {

using Json = nlohmann::ordered_json;

Json ParseJsonText(std::string_view text, std::string_view origin);
Json ParseJsonFile(const std::filesystem::path& path);

// Two-space indented, newline terminated.
std::string DumpJson(const Json& value);

// Quantized float for output.
Json Number(double value);

const Json& Field(const Json& object, std::string_view key,
                  std::string_view context);
bool HasField(const Json& object, std::string_view key);
std::string GetString(const Json& value, std::string_view context);
double GetNumber(const Json& value, std::string_view context);
std::int64_t GetInteger(const Json& value, std::string_view context);
const Json& GetArray(const Json& value, std::string_view context);
const Json& GetObject(const Json& value, std::string_view context);
std::vector<std::string> GetStringArray(const Json& value,
                                        std::string_view context);
std::vector<double> GetNumberArray(const Json& value,
                                   std::string_view context);

// printf("%.*f"); negative zero printed as zero.
std::string Fixed(double value, int decimals);

// Quotes a CSV cell when it contains a comma, quote or newline.
std::string CsvField(std::string_view text);

}  // namespace ctxfuse::internal

#endif  // CTXFUSE_SRC_JSON_UTIL_H_
