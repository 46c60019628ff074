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

#ifndef CTXFUSE_TOOLS_CLI_H_
#define CTXFUSE_TOOLS_CLI_H_

#include <iosfwd>

namespace ctxfuse::cli {

// Runs one ctxfuse subcommand. Data written with `--out -` goes to `out`,
// diagnostics to `err`. Returns 0 on success, 1 on a validation or I/O
// error, 2 on a usage error.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace ctxfuse::cli

#endif  // CTXFUSE_TOOLS_CLI_H_
