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

#include <functional>

#include "common.hpp"
#include "flarekit/cast.hpp"
#include "flarekit/color.hpp"
#include "flarekit/image_io.hpp"

namespace flarekit::cli
{

namespace
{

CastConfig cast_config_from_json(const nlohmann::json & j)
{
  CastConfig c;
  try {
    c.channels = j.value("channels", c.channels);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.n_l = j.value("n_l", c.n_l);
    c.s_lut = j.value("s_lut", c.s_lut);
    c.codebook_size = j.value("codebook_size", c.codebook_size);
    c.vocab_size = j.value("vocab_size", c.vocab_size);
    c.zero_fusion = j.value("zero_fusion", c.zero_fusion);
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed weight config: ") + e.what());
  }
  c.validate();
  return c;
}

// Encoder features of the hue and value planes of every image.
VectorSet image_features(const fs::path & dir, const WeightBundle & weights)
{
  VectorSet all;
  for (const std::string & rel : list_pngs(dir, true)) {
    const HsvImage hsv = rgb_to_hsv(read_png(dir / rel));
    Plane<double> hue(hsv.width(), hsv.height());
    for (std::size_t i = 0; i < hue.size(); ++i) {
      hue[i] = hsv.h[i] / 360.0;
    }
    for (const Plane<double> & plane : {std::cref(hue), std::cref(hsv.v)}) {
      const VectorSet f = feature_vectors(encode(plane, weights));
      all.dim = f.dim;
      all.values.insert(all.values.end(), f.values.begin(), f.values.end());
    }
  }
  return all;
}

}  // namespace

int cmd_init_weights(const InitWeightsOptions & opt)
{
  CastConfig config;
  if (opt.config) {
    require_exists(*opt.config, "--config");
    config = cast_config_from_json(read_json_file(*opt.config));
  }
  if (opt.images) {
    require_exists(*opt.images, "--images");
  }
  if (opt.kmeans_iters < 1) {
    throw UsageError("--kmeans-iters must be >= 1");
  }

  const WeightBundle weights = init_weights(config, opt.seed);
  Codebook codebook;
  if (opt.images) {
    const VectorSet features = image_features(*opt.images, weights);
    const KMeansResult km = fit_codebook_kmeans(features, config.codebook_size, opt.seed, opt.kmeans_iters);
    log_line(
      "init-weights: k-means on " + std::to_string(features.size()) + " features, final inertia " +
      std::to_string(km.inertia.back()));
    codebook = km.codebook;
  } else {
    codebook = random_codebook(config.codebook_size, config.channels, opt.seed + 1);
  }

  const fs::path codebook_path = opt.codebook_out.value_or(opt.out.parent_path() / "codebook.ntc");
  for (const fs::path & p : {opt.out, codebook_path}) {
    if (p.has_parent_path()) {
      fs::create_directories(p.parent_path());
    }
  }
  weights.save(opt.out);
  codebook.to_bundle().save(codebook_path);
  log_line("init-weights: wrote " + opt.out.string() + " and " + codebook_path.string());
  return kExitOk;
}

}  // namespace flarekit::cli
