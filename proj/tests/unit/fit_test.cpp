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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "flarekit/color.hpp"
#include "flarekit/fit.hpp"
#include "flarekit/random.hpp"
#include "scenes.hpp"

namespace flarekit
{
namespace
{

double relative_error(const std::vector<double> & a, const std::vector<double> & b)
{
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return std::sqrt(diff) / std::sqrt(norm);
}

LutBank perturbed_bank(int n_l, int s_lut, std::uint64_t seed)
{
  Rng rng(seed);
  LutBank bank = LutBank::identity(n_l, s_lut);
  for (LutSet & set : bank.sets) {
    for (Lut1D * lut : {&set.h, &set.s, &set.v}) {
      for (double & v : lut->values()) {
        v += 0.05 * rng.normal();
      }
    }
  }
  double total = 0.0;
  for (double & w : bank.weights) {
    w = 0.5 + rng.uniform();
    total += w;
  }
  for (double & w : bank.weights) {
    w /= total;
  }
  return bank;
}

// Random colors with hues inside the purple band.
RgbImage purple_tinted(int size, std::uint64_t seed)
{
  Rng rng(seed);
  RgbImage img(size, size);
  for (Rgb & p : img) {
    p = hsv_to_rgb(Hsv{rng.uniform(265.0, 335.0), rng.uniform(0.3, 1.0), rng.uniform(0.05, 1.0)});
  }
  return img;
}

FlareSample synthesized_sample(int size, std::uint64_t seed)
{
  SynthParams p;
  p.seed = 7;
  return std::get<FlareSample>(synthesize(testing::highlight_scene(size, seed), p));
}

TEST(FitConfig, DefaultsAndValidation)
{
  const FitConfig cfg;
  EXPECT_EQ(cfg.n_l, 1);
  EXPECT_EQ(cfg.s_lut, 33);
  EXPECT_EQ(cfg.weights.l1, 1.0);
  EXPECT_EQ(cfg.weights.perceptual, 0.0);
  EXPECT_EQ(cfg.weights.flare, 2.0);
  EXPECT_EQ(cfg.weights.commitment, 0.0);
  EXPECT_EQ(cfg.step, 0.05);
  EXPECT_EQ(cfg.max_iters, 500);
  EXPECT_EQ(cfg.tol, 1e-6);

  FitConfig bad = cfg;
  bad.step = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.max_iters = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(FitConfig, JsonRoundTripAndPartialOverrides)
{
  FitConfig cfg;
  cfg.n_l = 2;
  cfg.s_lut = 9;
  cfg.weights.perceptual = 0.25;
  cfg.step = 0.01;
  cfg.seed = 42;
  const FitConfig back = fit_config_from_json(nlohmann::json::parse(to_json(cfg).dump()));
  EXPECT_EQ(back.n_l, 2);
  EXPECT_EQ(back.s_lut, 9);
  EXPECT_EQ(back.weights.perceptual, 0.25);
  EXPECT_EQ(back.step, 0.01);
  EXPECT_EQ(back.seed, 42u);

  const FitConfig partial = fit_config_from_json({{"max_iters", 7}, {"weights", {{"flare", 0.5}}}});
  EXPECT_EQ(partial.max_iters, 7);
  EXPECT_EQ(partial.weights.flare, 0.5);
  EXPECT_EQ(partial.weights.l1, 1.0);
  EXPECT_EQ(partial.s_lut, 33);
  EXPECT_THROW(fit_config_from_json({{"step", -1.0}}), Error);
  EXPECT_THROW(fit_config_from_json({{"n_l", "two"}}), Error);
}

TEST(ParamLayout, FlattenRoundTrip)
{
  const LutBank bank = perturbed_bank(2, 4, 3);
  const std::vector<double> p = flatten_params(bank);
  ASSERT_EQ(p.size(), 2u * 3 * 4 + 2);
  EXPECT_EQ(p[0], bank.sets[0].h.values()[0]);
  EXPECT_EQ(p[4], bank.sets[0].s.values()[0]);
  EXPECT_EQ(p[12], bank.sets[1].h.values()[0]);
  EXPECT_EQ(p[24], bank.weights[0]);
  const LutBank back = unflatten_params(bank, p);
  EXPECT_EQ(flatten_params(back), p);
}

TEST(LutGradient, ZeroWhenOutputMatchesGroundTruth)
{
  const RgbImage gt = testing::random_image(12, 12, 1);
  const LutGradient g = lut_loss_gradient(rgb_to_hsv(gt), gt, LutBank::identity(3, 9), LossWeights{});
  for (const double v : g.flatten()) {
    EXPECT_EQ(v, 0.0);
  }
  // The identity start is a minimum: the central difference of |x| at 0
  // vanishes. Channels stay inside (0.05, 0.95) so no nudged end point
  // runs into the output clamp, which would make the difference one-sided.
  RgbImage mid(12, 12);
  Rng rng(2);
  for (Rgb & p : mid) {
    p = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
  }
  const LutGradient fd = finite_diff_gradient(rgb_to_hsv(mid), mid, LutBank::identity(1, 5), {1, 0, 0, 0});
  double worst = 0.0;
  for (const LutGradient::Set & set : fd.sets) {
    for (const std::vector<double> * curve : {&set.h, &set.s, &set.v}) {
      for (const double v : *curve) {
        worst = std::max(worst, std::fabs(v));
      }
    }
  }
  EXPECT_LT(worst, 1e-9);
  // The weight scales S and V together, so the output is quadratic in it
  // and the central difference keeps an O(step) remainder.
  const double coarse = finite_diff_gradient(rgb_to_hsv(mid), mid, LutBank::identity(1, 5), {1, 0, 0, 0}, 1e-4).weights[0];
  const double fine = finite_diff_gradient(rgb_to_hsv(mid), mid, LutBank::identity(1, 5), {1, 0, 0, 0}, 1e-6).weights[0];
  EXPECT_LT(std::fabs(coarse), 1e-3);
  EXPECT_LT(std::fabs(fine), 1e-2 * std::fabs(coarse) + 1e-12);
}

TEST(LutGradient, SinglePixelHandChainRule)
{
  // Gray pixel at hue 0: the output is (v', v'(1 - s'), v'(1 - s')), so the
  // V curve and the low end of the S curve carry the gradient.
  const RgbImage input(1, 1, Rgb{0.3, 0.3, 0.3});
  const RgbImage gt(1, 1, Rgb{0.5, 0.5, 0.5});
  const LossWeights l1_only{1.0, 0.0, 0.0, 0.0};
  const LutGradient g = lut_loss_gradient(rgb_to_hsv(input), gt, LutBank::identity(1, 2), l1_only);
  // dL/dv' = mean over 3 channels of sign(v' - gt) = -1; t = 0.3.
  EXPECT_NEAR(g.sets[0].v[0], -0.7, 1e-12);
  EXPECT_NEAR(g.sets[0].v[1], -0.3, 1e-12);
  EXPECT_EQ(g.sets[0].h[0], 0.0);
  EXPECT_EQ(g.sets[0].h[1], 0.0);
  // dL/ds' = (2/3) * sign(g - gt) * (-v') = 0.2, all on the knot at s = 0.
  EXPECT_NEAR(g.sets[0].s[0], 0.2, 1e-12);
  EXPECT_EQ(g.sets[0].s[1], 0.0);

  const RgbImage above(1, 1, Rgb{0.1, 0.1, 0.1});
  const LutGradient g2 = lut_loss_gradient(rgb_to_hsv(input), above, LutBank::identity(1, 2), l1_only);
  EXPECT_NEAR(g2.sets[0].v[0], 0.7, 1e-12);
  EXPECT_NEAR(g2.sets[0].v[1], 0.3, 1e-12);
}

TEST(LutGradient, MatchesFiniteDifferencesWithEveryTerm)
{
  const RgbImage input = testing::random_image(16, 16, 5);
  const RgbImage gt = testing::random_image(16, 16, 6);
  const HsvImage hsv = rgb_to_hsv(input);
  const LutBank bank = perturbed_bank(3, 5, 7);
  const LossWeights w{1.0, 0.1, 2.0, 0.0};
  const std::vector<double> analytic = lut_loss_gradient(hsv, gt, bank, w).flatten();
  const std::vector<double> numeric = finite_diff_gradient(hsv, gt, bank, w).flatten();
  EXPECT_LT(relative_error(analytic, numeric), 1e-4);
}

TEST(LutGradient, PurpleFixtureMatchesFiniteDifferences)
{
  // Purple ground truth with strong pixel-to-pixel edges keeps the penalty
  // mask busy. Hues straddle the 300 degree sector boundary, so the
  // difference step is kept small enough that no pixel crosses a kink.
  const RgbImage input = purple_tinted(16, 11);
  const RgbImage gt = purple_tinted(16, 12);
  const SoftMask penalty = penalty_mask(gt);
  ASSERT_GT(*std::max_element(penalty.begin(), penalty.end()), 0.1);
  const HsvImage hsv = rgb_to_hsv(input);
  const LutBank bank = perturbed_bank(2, 7, 8);
  const LossWeights w{1.0, 0.0, 2.0, 0.0};
  EXPECT_LT(
    relative_error(
      lut_loss_gradient(hsv, gt, bank, w).flatten(), finite_diff_gradient(hsv, gt, bank, w, 1e-6).flatten()),
    1e-4);
}

TEST(LutGradient, ScalesLinearlyWithTheLoss)
{
  const RgbImage input = testing::random_image(8, 8, 9);
  const RgbImage gt = testing::random_image(8, 8, 10);
  const HsvImage hsv = rgb_to_hsv(input);
  const LutBank bank = perturbed_bank(2, 5, 11);
  const LossWeights w{1.0, 0.1, 2.0, 0.0};
  const LossWeights w3{3.0, 0.3, 6.0, 0.0};
  EXPECT_NEAR(lut_loss(hsv, gt, bank, w3), 3.0 * lut_loss(hsv, gt, bank, w), 1e-12);
  const auto a = lut_loss_gradient(hsv, gt, bank, w).flatten();
  const auto b = lut_loss_gradient(hsv, gt, bank, w3).flatten();
  const auto fa = finite_diff_gradient(hsv, gt, bank, w).flatten();
  const auto fb = finite_diff_gradient(hsv, gt, bank, w3).flatten();
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(b[i], 3.0 * a[i], 1e-12);
    EXPECT_NEAR(fb[i], 3.0 * fa[i], 1e-9);
  }
}

TEST(LutLoss, IdentityBankMatchesImageLoss)
{
  const RgbImage input = testing::random_image(10, 10, 12);
  const RgbImage gt = testing::random_image(10, 10, 13);
  const LossWeights w{1.0, 0.1, 2.0, 0.0};
  const double got = lut_loss(rgb_to_hsv(input), gt, LutBank::identity(1, 33), w);
  const RgbImage out = correct_rgb(input, LutBank::identity(1, 33));
  EXPECT_NEAR(got, image_loss(out, gt, penalty_mask(gt), w).total, 1e-12);
}

TEST(FitLuts, InputEqualToGroundTruthKeepsIdentity)
{
  const RgbImage img = testing::highlight_scene(32, 2);
  const FitResult r = fit_luts(img, img, nullptr, FitConfig{});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_NEAR(r.trace[0].loss, 0.0, 1e-12);
  const LutBank id = LutBank::identity(1, 33);
  EXPECT_EQ(flatten_params(r.bank), flatten_params(id));
}

TEST(FitLuts, HalvedValueIsRecovered)
{
  const RgbImage input = purple_tinted(32, 3);
  RgbImage gt(32, 32);
  for (std::size_t i = 0; i < input.size(); ++i) {
    Hsv p = rgb_to_hsv(input[i]);
    p.v *= 0.5;
    gt[i] = hsv_to_rgb(p);
  }
  const FitResult r = fit_luts(input, gt, nullptr, FitConfig{});
  EXPECT_LT(l1_loss(r.output, gt), 1e-3);
  // Interior control points of the V curve follow the 0.5 x line.
  const std::vector<double> & v = r.bank.sets[0].v.values();
  for (std::size_t k = 2; k + 1 < v.size(); ++k) {
    EXPECT_NEAR(v[k], 0.5 * k / 32.0, 0.02) << k;
  }
}

TEST(FitLuts, TraceNeverIncreasesAndEndsBelowTheStart)
{
  const FlareSample s = synthesized_sample(48, 4);
  FitConfig cfg;
  cfg.max_iters = 60;
  const FitResult r = fit_luts(s, cfg);
  ASSERT_GE(r.trace.size(), 2u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LT(r.trace[i].loss, r.trace[i - 1].loss);
    EXPECT_EQ(r.trace[i].iteration, static_cast<int>(i));
    EXPECT_GT(r.trace[i].step, 0.0);
    EXPECT_LE(r.trace[i].step, cfg.step);
  }
  EXPECT_LE(r.trace.size(), 61u);
  EXPECT_NO_THROW(r.bank.validate());
}

TEST(FitLuts, SynthesizedSampleImprovesStrictly)
{
  const FlareSample s = synthesized_sample(64, 7001);
  const MetricsReport before = evaluate(s.input, s.gt, &s.input, &s.mask);
  const FitResult r = fit_luts(s, FitConfig{});
  ASSERT_TRUE(r.metrics.psnr_f.has_value());
  EXPECT_GT(*r.metrics.psnr_f, *before.psnr_f);
  EXPECT_LT(r.metrics.hae, before.hae);
  EXPECT_GT(r.metrics.psnr, before.psnr);
}

TEST(FitLuts, DeterministicAcrossRuns)
{
  const FlareSample s = synthesized_sample(32, 5);
  FitConfig cfg;
  cfg.n_l = 2;
  cfg.s_lut = 9;
  cfg.weights.perceptual = 0.1;
  cfg.max_iters = 40;
  const FitResult a = fit_luts(s, cfg);
  const FitResult b = fit_luts(s, cfg);
  EXPECT_EQ(flatten_params(a.bank), flatten_params(b.bank));
  EXPECT_EQ(trace_csv(a.trace), trace_csv(b.trace));
  EXPECT_EQ(a.output, b.output);
}

TEST(FitLuts, NanLossNamesTheIteration)
{
  const RgbImage input = testing::random_image(8, 8, 1);
  RgbImage gt = input;
  gt[3].g = std::numeric_limits<double>::quiet_NaN();
  try {
    fit_luts(input, gt, nullptr, FitConfig{});
    FAIL() << "expected Error";
  } catch (const Error & e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(fit_luts(input, RgbImage(4, 4), nullptr, FitConfig{}), ShapeError);
}

TEST(TraceCsv, HeaderAndRows)
{
  const std::string csv = trace_csv({{0, 0.5, 0.0}, {1, 0.25, 0.05}});
  EXPECT_EQ(csv, "iteration,loss,step\n0,0.5,0\n1,0.25,0.050000000000000003\n");
}

}  // namespace
}  // namespace flarekit
