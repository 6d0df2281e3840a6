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

#include <variant>

#include "common.hpp"
#include "flarekit/image_io.hpp"
#include "flarekit/manifest.hpp"
#include "flarekit/parallel.hpp"
#include "flarekit/random.hpp"

namespace flarekit::cli
{

namespace
{

struct Frame
{
  std::string scene_id;
  std::string frame_id;
  fs::path source;
};

enum class Outcome
{
  kWritten,
  kNoFlare,
  kFailed,
};

std::string stem_of(const std::string & relative)
{
  return fs::path(relative).replace_extension().generic_string();
}

}  // namespace

int cmd_synth(const SynthOptions & opt)
{
  require_exists(opt.in, "--in");
  if (!fs::is_directory(opt.in)) {
    throw UsageError("--in must be a directory of scene folders");
  }
  SynthParams base;
  if (opt.params) {
    require_exists(*opt.params, "--params");
    base = synth_params_from_json(read_json_file(*opt.params));
  }

  std::vector<std::string> scenes;
  for (const auto & e : fs::directory_iterator(opt.in)) {
    if (e.is_directory()) {
      scenes.push_back(e.path().filename().string());
    }
  }
  std::sort(scenes.begin(), scenes.end());
  std::vector<Frame> frames;
  for (const std::string & scene : scenes) {
    for (const std::string & rel : list_pngs(opt.in / scene, false)) {
      frames.push_back({scene, stem_of(rel), opt.in / scene / rel});
    }
  }
  if (frames.empty()) {
    log_line("no scenes found in " + opt.in.string());
    return kExitFailure;
  }

  for (const char * kind : {"input", "gt", "mask"}) {
    for (const std::string & scene : scenes) {
      fs::create_directories(opt.out / kind / scene);
    }
  }

  std::vector<Outcome> outcomes(frames.size(), Outcome::kFailed);
  std::vector<ManifestRecord> records(frames.size());
  parallel_for(frames.size(), worker_count(), [&](std::size_t i) {
    const Frame & f = frames[i];
    const std::string name = f.scene_id + "/" + f.frame_id;
    try {
      const RgbImage gt = read_png(f.source);
      SynthParams params = base;
      // Per-frame seed from the run seed and the frame's name, so results do
      // not depend on processing order.
      params.seed = stable_hash(name, opt.seed ^ 1469598103934665603ULL);
      const SynthResult result = synthesize(gt, params);
      if (const auto * none = std::get_if<NoFlare>(&result)) {
        log_line(
          "skipping " + name + ": " +
          (none->reason == NoFlare::Reason::kNoHighlights ? "no highlights" : "no flare candidates"));
        outcomes[i] = Outcome::kNoFlare;
        return;
      }
      const FlareSample & sample = std::get<FlareSample>(result);
      ManifestRecord r;
      r.scene_id = f.scene_id;
      r.frame_id = f.frame_id;
      r.input_path = "input/" + name + ".png";
      r.gt_path = "gt/" + name + ".png";
      r.mask_path = "mask/" + name + ".png";
      r.params = sample.params;
      write_png(opt.out / r.input_path, sample.input);
      write_png(opt.out / r.gt_path, sample.gt);
      write_mask_png(opt.out / r.mask_path, sample.mask);
      records[i] = std::move(r);
      outcomes[i] = Outcome::kWritten;
    } catch (const std::exception & e) {
      log_line("error: " + name + ": " + e.what());
    }
  });

  std::vector<ManifestRecord> written;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (outcomes[i] == Outcome::kWritten) {
      written.push_back(std::move(records[i]));
    } else if (outcomes[i] == Outcome::kFailed) {
      ++failed;
    }
  }
  write_manifest(opt.out / "manifest.jsonl", written);
  log_line(
    "synth: " + std::to_string(written.size()) + " written, " +
    std::to_string(frames.size() - written.size() - failed) + " without flare, " + std::to_string(failed) +
    " failed");
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace flarekit::cli
