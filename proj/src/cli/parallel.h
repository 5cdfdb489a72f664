// Copyright 2026 The csanon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSANON_CLI_PARALLEL_H_
#define CSANON_CLI_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace csanon::cli {

// Calls fn(i) for every i in [0, n) on up to `jobs` threads. fn must only
// write to state owned by index i. If any call throws, the exception from
// the lowest index is rethrown after all threads finish.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace csanon::cli

#endif  // CSANON_CLI_PARALLEL_H_
