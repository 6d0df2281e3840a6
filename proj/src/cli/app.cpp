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

#include <CLI11.hpp>

#include "common.hpp"
#include "flarekit/cli.hpp"

namespace flarekit::cli
{

int run(int argc, const char * const * argv)
{
  CLI::App app{"Purple flare synthesis, correction, fitting and evaluation"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto * s = app.add_subcommand("synth", "Synthesize flared/clean/mask triplets from scene folders");
  s->add_option("--in", synth.in, "Directory of scene subdirectories holding PNG frames")->required();
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--params", synth.params, "JSON file overriding synthesis parameters");
  s->add_option("--seed", synth.seed, "Run seed");

  SplitOptions split;
  auto * sp = app.add_subcommand("split", "Assign scene-level train/val/test splits to a manifest");
  sp->add_option("--manifest", split.manifest, "manifest.jsonl")->required();
  sp->add_option("--seed", split.seed, "Shuffle seed");
  sp->add_option("--out", split.out, "Write here instead of rewriting the manifest");

  CorrectOptions correct;
  auto * c = app.add_subcommand("correct", "Run the full correction network on images");
  c->add_option("--in", correct.in, "PNG image or directory of PNGs")->required();
  c->add_option("--weights", correct.weights, "Network weights (.ntc)")->required();
  c->add_option("--codebook", correct.codebook, "Codebook (.ntc)")->required();
  c->add_option("--out", correct.out, "Output directory")->required();

  FitOptions fit;
  auto * f = app.add_subcommand("fit", "Fit LUT banks directly against ground truth");
  f->add_option("--pair", fit.pair, "Input PNG and ground-truth PNG")->expected(2);
  f->add_option("--mask", fit.mask, "Flare mask for --pair (enables PSNR-F/NF)");
  f->add_option("--manifest", fit.manifest, "manifest.jsonl from synth");
  f->add_option("--config", fit.config, "JSON fit configuration");
  f->add_option("--out", fit.out, "Output directory")->required();

  EvalOptions eval;
  auto * e = app.add_subcommand("eval", "Compute metrics for predictions against ground truth");
  e->add_option("--pred", eval.pred, "Directory of predicted PNGs")->required();
  e->add_option("--gt", eval.gt, "Directory of ground-truth PNGs")->required();
  e->add_option("--mask", eval.mask, "Directory of flare masks");
  e->add_option("--input", eval.input, "Directory of degraded inputs (flare region for HAE)");
  e->add_option("--out", eval.out, "report.jsonl")->required();

  InitWeightsOptions init;
  auto * w = app.add_subcommand("init-weights", "Write seeded network weights and a codebook");
  w->add_option("--seed", init.seed, "Seed");
  w->add_option("--config", init.config, "JSON network configuration");
  w->add_option("--out", init.out, "Weights output (.ntc)")->required();
  w->add_option("--codebook-out", init.codebook_out, "Codebook output (default: codebook.ntc next to --out)");
  w->add_option("--images", init.images, "Fit the codebook by k-means on features of these images");
  w->add_option("--kmeans-iters", init.kmeans_iters, "k-means iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) {
      return cmd_synth(synth);
    }
    if (sp->parsed()) {
      return cmd_split(split);
    }
    if (c->parsed()) {
      return cmd_correct(correct);
    }
    if (f->parsed()) {
      return cmd_fit(fit);
    }
    if (e->parsed()) {
      return cmd_eval(eval);
    }
    return cmd_init_weights(init);
  } catch (const UsageError & err) {
    log_line(err.what());
    return kExitUsage;
  } catch (const std::exception & err) {
    log_line(std::string("error: ") + err.what());
    return kExitFailure;
  }
}

int run(const std::vector<std::string> & args)
{
  std::vector<const char *> argv{"flarekit"};
  for (const std::string & a : args) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace flarekit::cli
