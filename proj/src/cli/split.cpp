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

#include <map>
#include <set>
#include <utility>

#include "common.hpp"
#include "flarekit/manifest.hpp"

namespace flarekit::cli
{

int cmd_split(const SplitOptions & opt)
{
  require_exists(opt.manifest, "--manifest");
  std::vector<ManifestRecord> records = read_manifest(opt.manifest);

  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> scenes;
  for (const ManifestRecord & r : records) {
    if (!seen.emplace(r.scene_id, r.frame_id).second) {
      log_line("duplicate manifest record " + r.scene_id + "/" + r.frame_id);
      return kExitFailure;
    }
    scenes.insert(r.scene_id);
  }

  const SceneSplit split = split_scenes({scenes.begin(), scenes.end()}, opt.seed);
  std::map<std::string, std::string> assignment;
  for (const auto & [name, ids] :
       {std::pair{"train", &split.train}, std::pair{"val", &split.val}, std::pair{"test", &split.test}})
  {
    for (const std::string & id : *ids) {
      assignment[id] = name;
    }
  }
  for (ManifestRecord & r : records) {
    r.split = assignment.at(r.scene_id);
  }
  write_manifest(opt.out.value_or(opt.manifest), records);
  log_line(
    "split: " + std::to_string(split.train.size()) + " train, " + std::to_string(split.val.size()) + " val, " +
    std::to_string(split.test.size()) + " test scenes");
  return kExitOk;
}

}  // namespace flarekit::cli
