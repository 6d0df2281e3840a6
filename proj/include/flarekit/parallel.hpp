// Copyright 2026 The flarekit Authors
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

#ifndef FLAREKIT__PARALLEL_HPP_
#define FLAREKIT__PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace flarekit
{

/// Worker count: FLAREKIT_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs fn(i) for every i in [0, n) on up to `workers` threads. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> & fn);

}  // namespace flarekit

#endif  // FLAREKIT__PARALLEL_HPP_
