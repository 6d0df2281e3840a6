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

#include "flarekit/metrics.hpp"

#include <algorithm>

#include "common.hpp"
#include "flarekit/image_io.hpp"
#include "flarekit/parallel.hpp"

namespace flarekit::cli
{

namespace
{

struct Mean
{
  double sum = 0.0;
  std::size_t count = 0;

  void add(const std::optional<double> & v)
  {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  nlohmann::json value() const
  {
    return count == 0 ? nlohmann::json(nullptr) : nlohmann::json(sum / static_cast<double>(count));
  }
};

}  // namespace

int cmd_eval(const EvalOptions & opt)
{
  require_exists(opt.pred, "--pred");
  require_exists(opt.gt, "--gt");
  if (opt.mask) {
    require_exists(*opt.mask, "--mask");
  }
  if (opt.input) {
    require_exists(*opt.input, "--input");
  }

  const std::vector<std::string> names = list_pngs(opt.pred, true);
  std::vector<std::string> usable;
  std::size_t skipped = 0;
  for (const std::string & name : names) {
    std::vector<std::string> missing;
    if (!fs::exists(opt.gt / name)) {
      missing.push_back((opt.gt / name).string());
    }
    if (opt.mask && !fs::exists(*opt.mask / name)) {
      missing.push_back((*opt.mask / name).string());
    }
    if (opt.input && !fs::exists(*opt.input / name)) {
      missing.push_back((*opt.input / name).string());
    }
    if (missing.empty()) {
      usable.push_back(name);
      continue;
    }
    ++skipped;
    for (const std::string & m : missing) {
      log_line("skipping " + name + ": missing " + m);
    }
  }

  std::vector<std::optional<MetricsReport>> reports(usable.size());
  parallel_for(usable.size(), worker_count(), [&](std::size_t i) {
    const std::string & name = usable[i];
    try {
      const RgbImage pred = read_png(opt.pred / name);
      const RgbImage gt = read_png(opt.gt / name);
      std::optional<BinaryMask> mask;
      std::optional<RgbImage> input;
      if (opt.mask) {
        mask = read_mask_png(*opt.mask / name);
        if (std::count(mask->begin(), mask->end(), 1) == 0) {
          log_line("warning: " + name + ": empty flare mask, psnr_f is null");
        }
      }
      if (opt.input) {
        input = read_png(*opt.input / name);
      }
      reports[i] = evaluate(pred, gt, input ? &*input : nullptr, mask ? &*mask : nullptr);
    } catch (const std::exception & e) {
      log_line("error: " + name + ": " + e.what());
    }
  });

  std::string lines;
  Mean psnr, ssim, psnr_f, psnr_nf, hae, delta_e;
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    if (!reports[i]) {
      ++skipped;
      continue;
    }
    const MetricsReport & r = *reports[i];
    nlohmann::json j = to_json(r);
    j["name"] = usable[i];
    lines += j.dump() + "\n";
    psnr.add(r.psnr);
    ssim.add(r.ssim);
    psnr_f.add(r.psnr_f);
    psnr_nf.add(r.psnr_nf);
    hae.add(r.hae);
    delta_e.add(r.delta_e);
    ++evaluated;
  }
  const nlohmann::json aggregate = {
    {"aggregate", true},        {"count", evaluated},       {"skipped", skipped},
    {"psnr", psnr.value()},     {"ssim", ssim.value()},     {"psnr_f", psnr_f.value()},
    {"psnr_nf", psnr_nf.value()}, {"hae", hae.value()},     {"delta_e", delta_e.value()}};
  lines += aggregate.dump() + "\n";
  if (opt.out.has_parent_path()) {
    fs::create_directories(opt.out.parent_path());
  }
  write_text_file(opt.out, lines);
  log_line("eval: " + std::to_string(evaluated) + " evaluated, " + std::to_string(skipped) + " skipped");
  return skipped == 0 && evaluated > 0 ? kExitOk : kExitFailure;
}

}  // namespace flarekit::cli
