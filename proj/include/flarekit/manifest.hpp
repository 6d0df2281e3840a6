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

#ifndef FLAREKIT__MANIFEST_HPP_
#define FLAREKIT__MANIFEST_HPP_

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flarekit/synthesis.hpp"

namespace flarekit
{

/// One synthesized sample. Paths are relative to the manifest's directory.
struct ManifestRecord
{
  std::string scene_id;
  std::string frame_id;
  std::string input_path;
  std::string gt_path;
  std::string mask_path;
  SynthParams params;
  std::optional<std::string> split;  ///< "train", "val" or "test" once assigned
};

nlohmann::json to_json(const SynthParams & params);
/// Missing keys keep their defaults; the result is validated.
SynthParams synth_params_from_json(const nlohmann::json & j);

nlohmann::json to_json(const ManifestRecord & record);
ManifestRecord manifest_record_from_json(const nlohmann::json & j);

/// JSON Lines, one record per line; blank lines are skipped. Errors name
/// the offending line.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path & path);
void write_manifest(const std::filesystem::path & path, const std::vector<ManifestRecord> & records);

}  // namespace flarekit

#endif  // FLAREKIT__MANIFEST_HPP_
