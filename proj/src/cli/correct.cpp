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

#include <algorithm>

#include "common.hpp"
#include "flarekit/cast.hpp"
#include "flarekit/image_io.hpp"
#include "flarekit/parallel.hpp"

namespace flarekit::cli
{

int cmd_correct(const CorrectOptions & opt)
{
  require_exists(opt.in, "--in");
  require_exists(opt.weights, "--weights");
  require_exists(opt.codebook, "--codebook");

  const WeightBundle weights = WeightBundle::load(opt.weights);
  const Codebook codebook = Codebook::from_bundle(WeightBundle::load(opt.codebook));
  infer_dims(weights);

  std::vector<fs::path> sources;
  std::vector<fs::path> targets;
  if (fs::is_directory(opt.in)) {
    for (const std::string & rel : list_pngs(opt.in, false)) {
      sources.push_back(opt.in / rel);
      targets.push_back(opt.out / rel);
    }
  } else {
    sources.push_back(opt.in);
    targets.push_back(opt.out / opt.in.filename());
  }
  if (sources.empty()) {
    log_line("no PNG images in " + opt.in.string());
    return kExitFailure;
  }
  fs::create_directories(opt.out);

  std::vector<char> ok(sources.size(), 0);
  parallel_for(sources.size(), worker_count(), [&](std::size_t i) {
    try {
      write_png(targets[i], correct_image(read_png(sources[i]), codebook, weights));
      ok[i] = 1;
    } catch (const std::exception & e) {
      log_line("error: " + sources[i].string() + ": " + e.what());
    }
  });
  const auto done = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  log_line("correct: " + std::to_string(done) + " of " + std::to_string(sources.size()) + " images written");
  return done == sources.size() ? kExitOk : kExitFailure;
}

}  // namespace flarekit::cli
