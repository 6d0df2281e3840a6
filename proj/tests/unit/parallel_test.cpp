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


#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "flarekit/parallel.hpp"

namespace flarekit
{
namespace
{

TEST(ParallelFor, EveryIndexRunsOnce)
{
  for (const unsigned workers : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (const auto & h : hits) {
      ASSERT_EQ(h.load(), 1);
    }
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, FirstErrorIsRethrownAfterJoin)
{
  std::atomic<int> done{0};
  EXPECT_THROW(
    parallel_for(
      50, 3,
      [&](std::size_t i) {
        ++done;
        if (i == 10) {
          throw std::runtime_error("boom");
        }
      }),
    std::runtime_error);
  EXPECT_GE(done.load(), 1);
}

TEST(WorkerCount, HonorsEnvironmentOverride)
{
  ::setenv("FLAREKIT_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("FLAREKIT_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("FLAREKIT_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

}  // namespace
}  // namespace flarekit
