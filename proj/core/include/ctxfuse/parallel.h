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

#ifndef CTXFUSE_PARALLEL_H_
#define CTXFUSE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace ctxfuse {

// Worker cap: CTXFUSE_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t MaxThreads();

// Calls fn(i) for every i in [0, n), splitting the range into contiguous
// chunks over up to MaxThreads() workers. fn must only write to slot i of
// caller-owned storage, so results are independent of scheduling. The first
// exception thrown (lowest index) is rethrown after all workers join.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ctxfuse

#endif  // CTXFUSE_PARALLEL_H_
