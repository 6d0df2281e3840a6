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

#ifndef FLAREKIT__CLI_HPP_
#define FLAREKIT__CLI_HPP_

#include <string>
#include <vector>

namespace flarekit::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< some or all inputs failed
inline constexpr int kExitUsage = 2;    ///< bad flags or missing input paths

/// Parses the command line (argv[0] is the program name), runs the chosen
/// subcommand and returns the process exit code. Diagnostics go to stderr.
int run(int argc, const char * const * argv);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string> & args);

}  // namespace flarekit::cli

#endif  // FLAREKIT__CLI_HPP_
