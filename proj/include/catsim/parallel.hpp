// Copyright 2026 The catsim Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace catsim {

// Worker count: CATSIM_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_count();
void set_thread_count(int n);  // 0 restores the environment default

// Calls body(i) for i in [0, n). Each index is handled exactly once; results
// must be written to per-index slots so the gather order is deterministic.
// The first exception thrown by a worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace catsim
