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

#ifndef CTXFUSE_ERRORS_H_
#define CTXFUSE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ctxfuse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (not valid JSON, wrong shape, bad PPM header).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure while reading or writing.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxfuse

#endif  // CTXFUSE_ERRORS_H_
