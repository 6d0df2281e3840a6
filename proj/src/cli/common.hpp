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

#ifndef FLAREKIT_CLI__COMMON_HPP_
#define FLAREKIT_CLI__COMMON_HPP_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flarekit/cli.hpp"
#include "flarekit/error.hpp"

namespace flarekit::cli
{

namespace fs = std::filesystem;

/// Maps to kExitUsage.
class UsageError : public Error
{
public:
  using Error::Error;
};

/// Thread-safe line to stderr, prefixed with the program name.
void log_line(const std::string & text);

void require_exists(const fs::path & path, const std::string & flag);

/// PNG files under dir (recursively if asked), as sorted paths relative to
/// dir with generic separators.
std::vector<std::string> list_pngs(const fs::path & dir, bool recursive);

nlohmann::json read_json_file(const fs::path & path);
void write_text_file(const fs::path & path, const std::string & text);

struct SynthOptions
{
  fs::path in;
  fs::path out;
  std::optional<fs::path> params;
  std::uint64_t seed = 0;
};

struct SplitOptions
{
  fs::path manifest;
  std::optional<fs::path> out;
  std::uint64_t seed = 0;
};

struct CorrectOptions
{
  fs::path in;
  fs::path weights;
  fs::path codebook;
  fs::path out;
};

struct FitOptions
{
  std::vector<fs::path> pair;
  std::optional<fs::path> mask;
  std::optional<fs::path> manifest;
  std::optional<fs::path> config;
  fs::path out;
};

struct EvalOptions
{
  fs::path pred;
  fs::path gt;
  std::optional<fs::path> mask;
  std::optional<fs::path> input;
  fs::path out;
};

struct InitWeightsOptions
{
  std::uint64_t seed = 0;
  std::optional<fs::path> config;
  fs::path out;
  std::optional<fs::path> codebook_out;
  std::optional<fs::path> images;
  int kmeans_iters = 50;
};

int cmd_synth(const SynthOptions & opt);
int cmd_split(const SplitOptions & opt);
int cmd_correct(const CorrectOptions & opt);
int cmd_fit(const FitOptions & opt);
int cmd_eval(const EvalOptions & opt);
int cmd_init_weights(const InitWeightsOptions & opt);

}  // namespace flarekit::cli

#endif  // FLAREKIT_CLI__COMMON_HPP_
