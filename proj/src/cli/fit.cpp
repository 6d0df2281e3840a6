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

#include "flarekit/fit.hpp"

#include "common.hpp"
#include "flarekit/image_io.hpp"
#include "flarekit/manifest.hpp"
#include "flarekit/parallel.hpp"

namespace flarekit::cli
{

namespace
{

struct FitJob
{
  std::string name;  // output stem relative to --out
  fs::path input;
  fs::path gt;
  std::optional<fs::path> mask;
};

}  // namespace

int cmd_fit(const FitOptions & opt)
{
  if (opt.pair.empty() == !opt.manifest.has_value()) {
    throw UsageError("give exactly one of --pair or --manifest");
  }
  FitConfig cfg;
  if (opt.config) {
    require_exists(*opt.config, "--config");
    cfg = fit_config_from_json(read_json_file(*opt.config));
  }

  std::vector<FitJob> jobs;
  if (!opt.pair.empty()) {
    if (opt.pair.size() != 2) {
      throw UsageError("--pair takes an input and a ground-truth PNG");
    }
    require_exists(opt.pair[0], "--pair");
    require_exists(opt.pair[1], "--pair");
    if (opt.mask) {
      require_exists(*opt.mask, "--mask");
    }
    jobs.push_back({opt.pair[0].stem().string(), opt.pair[0], opt.pair[1], opt.mask});
  } else {
    require_exists(*opt.manifest, "--manifest");
    const fs::path root = opt.manifest->parent_path();
    for (const ManifestRecord & r : read_manifest(*opt.manifest)) {
      jobs.push_back(
        {r.scene_id + "/" + r.frame_id, root / r.input_path, root / r.gt_path, root / r.mask_path});
    }
  }
  if (jobs.empty()) {
    log_line("nothing to fit");
    return kExitFailure;
  }
  for (const FitJob & job : jobs) {
    fs::create_directories((opt.out / job.name).parent_path());
  }

  std::vector<std::optional<nlohmann::json>> reports(jobs.size());
  parallel_for(jobs.size(), worker_count(), [&](std::size_t i) {
    const FitJob & job = jobs[i];
    try {
      const RgbImage input = read_png(job.input);
      const RgbImage gt = read_png(job.gt);
      std::optional<BinaryMask> mask;
      if (job.mask) {
        mask = read_mask_png(*job.mask);
      }
      const FitResult result = fit_luts(input, gt, mask ? &*mask : nullptr, cfg);
      const fs::path stem = opt.out / job.name;
      write_text_file(fs::path(stem.string() + ".lut.json"), lut_bank_to_json(result.bank).dump(2) + "\n");
      write_text_file(fs::path(stem.string() + ".trace.csv"), trace_csv(result.trace));
      write_png(fs::path(stem.string() + ".png"), result.output);
      reports[i] = nlohmann::json{
        {"name", job.name},
        {"iterations", result.trace.back().iteration},
        {"initial_loss", result.trace.front().loss},
        {"final_loss", result.trace.back().loss},
        {"metrics", to_json(result.metrics)}};
    } catch (const std::exception & e) {
      log_line("error: " + job.name + ": " + e.what());
    }
  });

  std::string report;
  std::size_t done = 0;
  for (const auto & r : reports) {
    if (r) {
      report += r->dump() + "\n";
      ++done;
    }
  }
  write_text_file(opt.out / "fit_report.jsonl", report);
  log_line("fit: " + std::to_string(done) + " of " + std::to_string(jobs.size()) + " samples fitted");
  return done == jobs.size() ? kExitOk : kExitFailure;
}

}  // namespace flarekit::cli
