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

#include "flarekit/cast.hpp"
#include "flarekit/color.hpp"
#include "flarekit/random.hpp"
#include "scenes.hpp"

namespace flarekit
{
namespace
{

CastConfig small_config()
{
  CastConfig cfg;
  cfg.channels = 4;
  cfg.hidden_dim = 8;
  cfg.n_l = 3;
  cfg.s_lut = 5;
  cfg.codebook_size = 16;
  return cfg;
}

Plane<double> random_plane(int w, int h, std::uint64_t seed)
{
  Rng rng(seed);
  Plane<double> p(w, h);
  for (double & v : p) {
    v = rng.uniform();
  }
  return p;
}

// Literal 3x3 convolution: for each output cell, sum over every input
// channel and tap with the source coordinate clamped into the input.
FeatureMap conv_oracle(
  const FeatureMap & in, const WeightBundle & wb, const std::string & name, int stride, bool relu)
{
  const Tensor & w = wb.get(name + ".weight");
  const Tensor & b = wb.get(name + ".bias");
  const int out_c = static_cast<int>(w.shape[0]);
  const int in_c = static_cast<int>(w.shape[1]);
  const int oh = static_cast<int>(std::ceil(in.height / static_cast<double>(stride)));
  const int ow = static_cast<int>(std::ceil(in.width / static_cast<double>(stride)));
  FeatureMap out(out_c, oh, ow);
  for (int o = 0; o < out_c; ++o) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double acc = b.data[static_cast<std::size_t>(o)];
        for (int i = 0; i < in_c; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              const int sy = std::clamp(y * stride + ky - 1, 0, in.height - 1);
              const int sx = std::clamp(x * stride + kx - 1, 0, in.width - 1);
              const std::size_t wi = ((static_cast<std::size_t>(o) * in_c + i) * 3 + ky) * 3 + kx;
              acc += w.data[wi] * in.at(i, sy, sx);
            }
          }
        }
        out.at(o, y, x) = relu ? std::max(acc, 0.0) : acc;
      }
    }
  }
  return out;
}

FeatureMap upsample_oracle(const FeatureMap & in)
{
  FeatureMap out(in.channels, in.height * 2, in.width * 2);
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        out.at(c, y, x) = in.at(c, y >> 1, x >> 1);
      }
    }
  }
  return out;
}

FeatureMap encode_oracle(const Plane<double> & plane, const WeightBundle & wb)
{
  FeatureMap x(1, plane.height(), plane.width());
  for (int y = 0; y < plane.height(); ++y) {
    for (int xx = 0; xx < plane.width(); ++xx) {
      x.at(0, y, xx) = plane(xx, y);
    }
  }
  x = conv_oracle(x, wb, "encoder.conv0", 2, true);
  x = conv_oracle(x, wb, "encoder.conv1", 1, true);
  x = conv_oracle(x, wb, "encoder.conv2", 2, true);
  return conv_oracle(x, wb, "encoder.conv3", 1, false);
}

std::vector<double> dense_oracle(const std::vector<double> & x, const WeightBundle & wb, const std::string & name)
{
  const Tensor & w = wb.get(name + ".weight");
  const Tensor & b = wb.get(name + ".bias");
  std::vector<double> y(w.shape[0]);
  for (std::size_t r = 0; r < y.size(); ++r) {
    y[r] = b.data[r];
    for (std::size_t c = 0; c < x.size(); ++c) {
      y[r] += w.data[r * w.shape[1] + c] * x[c];
    }
  }
  return y;
}

FeatureMap random_features(int c, int h, int w, std::uint64_t seed)
{
  Rng rng(seed);
  FeatureMap f(c, h, w);
  for (double & v : f.data) {
    v = rng.normal();
  }
  return f;
}

WeightBundle zeroed(const WeightBundle & wb)
{
  WeightBundle out;
  for (const auto & [name, t] : wb.tensors()) {
    out.set(name, Tensor(t.shape));
  }
  return out;
}

TEST(CastConfig, DefaultsGiveDout1584)
{
  const CastConfig cfg;
  EXPECT_EQ(cfg.n_l * 3 * cfg.s_lut, 1584);
  EXPECT_TRUE(cfg.zero_fusion);
  CastConfig bad = cfg;
  bad.s_lut = 1;
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.vocab_size = 10;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(InitWeights, DeterministicAndShapesInferred)
{
  const WeightBundle a = init_weights(small_config(), 4);
  const WeightBundle b = init_weights(small_config(), 4);
  EXPECT_EQ(a.serialize(), b.serialize());
  EXPECT_NE(a.serialize(), init_weights(small_config(), 5).serialize());

  const CastDims dims = infer_dims(a);
  EXPECT_EQ(dims.channels, 4);
  EXPECT_EQ(dims.hidden_dim, 8);
  EXPECT_EQ(dims.weight_hidden, 2);
  EXPECT_EQ(dims.n_l, 3);
  EXPECT_EQ(dims.s_lut, 5);
  EXPECT_EQ(dims.vocab_size, 16);
  EXPECT_EQ(a.get("lut_gen.fc2.weight").shape, (std::vector<std::uint32_t>{45, 8}));

  const Tensor & fusion = a.get("fusion.weight");
  EXPECT_TRUE(std::all_of(fusion.data.begin(), fusion.data.end(), [](float v) { return v == 0.0f; }));
}

TEST(InitWeights, DefaultConfigDeclaresFullLutHead)
{
  const WeightBundle wb = init_weights(CastConfig{}, 1);
  EXPECT_EQ(wb.get("lut_gen.fc2.weight").shape[0], 1584u);
  EXPECT_EQ(infer_dims(wb).s_lut, 33);
  EXPECT_EQ(infer_dims(wb).n_l, 16);
}

TEST(InferDims, MissingOrWrongTensorIsNamed)
{
  WeightBundle wb = init_weights(small_config(), 1);
  WeightBundle missing;
  for (const auto & [name, t] : wb.tensors()) {
    if (name != "decoder.conv2.bias") {
      missing.set(name, t);
    }
  }
  try {
    infer_dims(missing);
    FAIL() << "expected MissingTensor";
  } catch (const MissingTensor & e) {
    EXPECT_NE(std::string(e.what()).find("decoder.conv2.bias"), std::string::npos) << e.what();
  }

  // A LUT head whose row count is not N_L * 3 * S_LUT is rejected.
  wb.set("lut_gen.fc2.weight", Tensor({44, 8}));
  try {
    infer_dims(wb);
    FAIL() << "expected MissingTensor";
  } catch (const MissingTensor & e) {
    EXPECT_NE(std::string(e.what()).find("lut_gen.fc2.weight"), std::string::npos) << e.what();
  }
}

TEST(Encode, MatchesNaiveConvolution)
{
  const WeightBundle wb = init_weights(small_config(), 21);
  const Plane<double> plane = random_plane(13, 10, 3);
  const FeatureMap got = encode(plane, wb);
  const FeatureMap want = encode_oracle(plane, wb);
  ASSERT_TRUE(got.same_shape(want));
  EXPECT_EQ(got.height, 3);
  EXPECT_EQ(got.width, 4);
  for (std::size_t i = 0; i < got.data.size(); ++i) {
    ASSERT_NEAR(got.data[i], want.data[i], 1e-5);
  }
}

TEST(Encode, OutputIsQuarterSizeRoundedUp)
{
  const WeightBundle wb = init_weights(small_config(), 2);
  for (const auto & [w, h] : std::vector<std::pair<int, int>>{{1, 1}, {4, 4}, {5, 9}, {16, 7}}) {
    const FeatureMap f = encode(random_plane(w, h, 1), wb);
    EXPECT_EQ(f.width, (w + 3) / 4);
    EXPECT_EQ(f.height, (h + 3) / 4);
    EXPECT_EQ(f.channels, 4);
  }
}

TEST(Encode, ZeroWeightsGiveZeroFeatures)
{
  const WeightBundle wb = zeroed(init_weights(small_config(), 2));
  const FeatureMap f = encode(random_plane(8, 8, 1), wb);
  EXPECT_TRUE(std::all_of(f.data.begin(), f.data.end(), [](double v) { return v == 0.0; }));
}

TEST(Encode, SharedWeightsForBothPlanes)
{
  const WeightBundle wb = init_weights(small_config(), 6);
  const RgbImage img = testing::random_image(12, 12, 2);
  const HsvImage hsv = rgb_to_hsv(img);
  Plane<double> hue(12, 12);
  for (std::size_t i = 0; i < hue.size(); ++i) {
    hue[i] = hsv.h[i] / 360.0;
  }
  const Codebook cb = random_codebook(16, 4, 1);
  const CastForward fwd = reconstruct(img, cb, wb);
  // Swapping the planes swaps the features: one encoder serves both.
  EXPECT_EQ(fwd.f_h.data, encode(hue, wb).data);
  EXPECT_EQ(fwd.f_v.data, encode(hsv.v, wb).data);
}

TEST(Decode, MatchesNaiveUpsampleAndConvolution)
{
  const WeightBundle wb = init_weights(small_config(), 22);
  const FeatureMap q = random_features(4, 3, 4, 9);
  const Plane<double> got = decode(q, wb, 13, 10);
  FeatureMap x = conv_oracle(q, wb, "decoder.conv0", 1, true);
  x = conv_oracle(upsample_oracle(x), wb, "decoder.conv1", 1, true);
  x = conv_oracle(x, wb, "decoder.conv2", 1, true);
  x = conv_oracle(upsample_oracle(x), wb, "decoder.conv3", 1, false);
  ASSERT_EQ(got.width(), 13);
  ASSERT_EQ(got.height(), 10);
  for (int y = 0; y < 10; ++y) {
    for (int xx = 0; xx < 13; ++xx) {
      ASSERT_NEAR(got(xx, y), std::clamp(x.at(0, y, xx), 0.0, 1.0), 1e-5);
    }
  }
}

TEST(Decode, ZeroWeightsGiveZeroPlaneAndOversizeThrows)
{
  const WeightBundle wb = zeroed(init_weights(small_config(), 2));
  const Plane<double> p = decode(random_features(4, 2, 2, 1), wb, 7, 8);
  EXPECT_TRUE(std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; }));
  EXPECT_THROW(decode(random_features(4, 2, 2, 1), wb, 9, 8), ShapeError);
}

TEST(VqQuantize, HandExamples)
{
  Codebook cb;
  cb.entries.dim = 1;
  cb.entries.values = {0.0, 1.0};
  FeatureMap f(1, 1, 3);
  f.data = {0.4, 0.5, 1.0};
  const VqResult r = vq_quantize(f, cb);
  EXPECT_EQ(r.tokens(0, 0), 0);
  EXPECT_EQ(r.tokens(1, 0), 0);  // tie goes to the lower index
  EXPECT_EQ(r.tokens(2, 0), 1);
  EXPECT_EQ(r.quantized.data, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(VqQuantize, BruteForceNearestNeighbor)
{
  const Codebook cb = random_codebook(64, 8, 3);
  const FeatureMap f = random_features(8, 25, 40, 4);
  const VqResult r = vq_quantize(f, cb);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 64; ++k) {
        double d = 0.0;
        for (int c = 0; c < 8; ++c) {
          const double diff = f.at(c, y, x) - cb.entries.values[static_cast<std::size_t>(k * 8 + c)];
          d += diff * diff;
        }
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      ASSERT_EQ(r.tokens(x, y), best);
      for (int c = 0; c < 8; ++c) {
        ASSERT_EQ(r.quantized.at(c, y, x), cb.entries.values[static_cast<std::size_t>(best * 8 + c)]);
      }
    }
  }
}

TEST(VqQuantize, ExactEntriesQuantizeToThemselves)
{
  const Codebook cb = random_codebook(10, 3, 5);
  FeatureMap f(3, 1, 10);
  for (int k = 0; k < 10; ++k) {
    for (int c = 0; c < 3; ++c) {
      f.at(c, 0, k) = cb.entries.values[static_cast<std::size_t>(k * 3 + c)];
    }
  }
  const VqResult r = vq_quantize(f, cb);
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(r.tokens(k, 0), k);
  }
  EXPECT_EQ(commitment_loss(f, r.quantized), 0.0);
  EXPECT_THROW(vq_quantize(random_features(4, 1, 1, 1), cb), ShapeError);
}

TEST(CommitmentLoss, ElementwiseOracle)
{
  const FeatureMap a = random_features(3, 4, 5, 1);
  const FeatureMap b = random_features(3, 4, 5, 2);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    acc += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
  }
  EXPECT_NEAR(commitment_loss(a, b), acc / 60.0, 1e-12);

  FeatureMap zeros(2, 2, 2);
  FeatureMap ones(2, 2, 2);
  std::fill(ones.data.begin(), ones.data.end(), 1.0);
  EXPECT_EQ(commitment_loss(zeros, ones), 1.0);
  EXPECT_EQ(commitment_loss(a, a), 0.0);
  EXPECT_THROW(commitment_loss(a, zeros), ShapeError);
}

TEST(Reconstruct, SaturationPassesThroughAndTokenShapes)
{
  const WeightBundle wb = init_weights(small_config(), 8);
  const Codebook cb = random_codebook(16, 4, 2);
  const RgbImage img = testing::random_image(10, 7, 3);
  const CastForward fwd = reconstruct(img, cb, wb);
  const HsvImage hsv = rgb_to_hsv(img);
  EXPECT_EQ(fwd.recon_hsv.s, hsv.s);
  EXPECT_EQ(fwd.t_h.width(), 3);
  EXPECT_EQ(fwd.t_h.height(), 2);
  EXPECT_EQ(fwd.t_v.width(), 3);
  EXPECT_EQ(fwd.recon.width(), 10);
  EXPECT_EQ(fwd.recon.height(), 7);
}

// Hand-built weights that make the autoencoder exact on constant planes:
// one channel, center taps of 1, codebook holding the plane's value.
TEST(Reconstruct, HandBuiltIdentityNetworkOnConstantPlanes)
{
  WeightBundle wb;
  auto center_tap = [&](const std::string & name) {
    Tensor w({1, 1, 3, 3});
    w.data[4] = 1.0f;
    wb.set(name + ".weight", w);
    wb.set(name + ".bias", Tensor({1}));
  };
  for (int i = 0; i < 4; ++i) {
    center_tap("encoder.conv" + std::to_string(i));
    center_tap("decoder.conv" + std::to_string(i));
  }
  Codebook cb;
  cb.entries.dim = 1;
  for (int k = 0; k <= 20; ++k) {
    cb.entries.values.push_back(k / 20.0);
  }
  // Hue 240 -> 2/3 turn is not a codebook value; V = 0.5 and S = 1 are.
  const RgbImage img(9, 6, Rgb{0.0, 0.0, 0.5});
  const CastForward fwd = reconstruct(img, cb, wb);
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_NEAR(fwd.recon_hsv.v[i], 0.5, 1e-12);
    // Nearest entry to 2/3 is 0.65, i.e. 234 degrees.
    EXPECT_NEAR(fwd.recon_hsv.h[i], 234.0, 1e-9);
  }
  EXPECT_NEAR(commitment_loss(fwd.f_v, fwd.q_v), 0.0, 1e-24);
  EXPECT_NEAR(commitment_loss(fwd.f_h, fwd.q_h), std::pow(2.0 / 3.0 - 0.65, 2), 1e-12);
}

TEST(AggregateTokens, LookupAndAverage)
{
  const WeightBundle wb = init_weights(small_config(), 3);
  const Tensor & emb = wb.get("token_embedding");
  Rng rng(4);
  TokenGrid th(3, 2);
  TokenGrid tv(3, 2);
  for (auto & t : th) {
    t = static_cast<std::int32_t>(rng.below(16));
  }
  for (auto & t : tv) {
    t = static_cast<std::int32_t>(rng.below(16));
  }
  const TokenFeature f = aggregate_tokens(th, tv, wb);
  ASSERT_EQ(f.size(), 8u);
  for (std::size_t j = 0; j < 8; ++j) {
    double acc = 0.0;
    for (const TokenGrid * g : {&th, &tv}) {
      for (const auto t : *g) {
        acc += emb.data[static_cast<std::size_t>(t) * 8 + j];
      }
    }
    EXPECT_NEAR(f[j], acc / 12.0, 1e-12);
  }
}

TEST(AggregateTokens, IdenticalTokensAndPairs)
{
  const WeightBundle wb = init_weights(small_config(), 3);
  const Tensor & emb = wb.get("token_embedding");
  const TokenFeature same = aggregate_tokens(TokenGrid(2, 2, 5), TokenGrid(1, 1, 5), wb);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_NEAR(same[j], emb.data[5 * 8 + j], 1e-6);
  }
  const TokenFeature pair = aggregate_tokens(TokenGrid(1, 1, 2), TokenGrid(1, 1, 7), wb);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_NEAR(pair[j], 0.5 * (double{emb.data[2 * 8 + j]} + double{emb.data[7 * 8 + j]}), 1e-12);
  }
  EXPECT_THROW(aggregate_tokens(TokenGrid(1, 1, 16), TokenGrid(1, 1, 0), wb), Error);
}

TEST(GenerateLuts, ZeroWeightsGiveHalfEverywhere)
{
  const WeightBundle wb = zeroed(init_weights(CastConfig{}, 1));
  const std::vector<LutSet> sets = generate_luts(TokenFeature(128, 0.3), wb);
  ASSERT_EQ(sets.size(), 16u);
  std::size_t count = 0;
  for (const LutSet & set : sets) {
    for (const Lut1D * lut : {&set.h, &set.s, &set.v}) {
      for (const double v : lut->values()) {
        EXPECT_EQ(v, 0.5);
        ++count;
      }
    }
  }
  EXPECT_EQ(count, 1584u);
}

TEST(GenerateLuts, MatchesDenseOracleAndLayout)
{
  const WeightBundle wb = init_weights(small_config(), 12);
  Rng rng(1);
  TokenFeature f(8);
  for (double & v : f) {
    v = rng.normal();
  }
  std::vector<double> h = dense_oracle(f, wb, "lut_gen.fc1");
  for (double & v : h) {
    v = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
  }
  const std::vector<double> z = dense_oracle(h, wb, "lut_gen.fc2");
  const std::vector<LutSet> sets = generate_luts(f, wb);
  ASSERT_EQ(sets.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const Lut1D * curves[3] = {&sets[i].h, &sets[i].s, &sets[i].v};
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < 5; ++k) {
        const double want = 1.0 / (1.0 + std::exp(-z[(i * 3 + c) * 5 + k]));
        EXPECT_NEAR(curves[c]->values()[k], want, 1e-12);
        EXPECT_GT(curves[c]->values()[k], 0.0);
        EXPECT_LT(curves[c]->values()[k], 1.0);
      }
    }
    EXPECT_EQ(sets[i].h.domain(), LutDomain::kCircular);
  }
  EXPECT_THROW(generate_luts(TokenFeature(7), wb), ShapeError);
}

TEST(GenerateWeights, ZeroWeightsAreUniformAndRandomSumToOne)
{
  const WeightBundle zero = zeroed(init_weights(CastConfig{}, 1));
  for (const double w : generate_weights(TokenFeature(128, 1.0), zero)) {
    EXPECT_DOUBLE_EQ(w, 1.0 / 16.0);
  }
  const WeightBundle wb = init_weights(small_config(), 2);
  Rng rng(3);
  TokenFeature f(8);
  for (double & v : f) {
    v = 3.0 * rng.normal();
  }
  const std::vector<double> w = generate_weights(f, wb);
  ASSERT_EQ(w.size(), 3u);
  double total = 0.0;
  for (const double v : w) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Softmax, LogOneLogThree)
{
  const std::vector<double> logits{std::log(1.0), std::log(3.0)};
  const std::vector<double> p = softmax(logits);
  EXPECT_NEAR(p[0], 0.25, 1e-9);
  EXPECT_NEAR(p[1], 0.75, 1e-9);
}

TEST(Softmax, ShiftInvariantAndStable)
{
  const std::vector<double> a{0.3, -1.2, 2.5, 0.0};
  std::vector<double> b = a;
  for (double & v : b) {
    v += 1000.0;
  }
  const auto pa = softmax(a);
  const auto pb = softmax(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(pa[i], pb[i], 1e-12);
    EXPECT_TRUE(std::isfinite(pb[i]));
  }
  EXPECT_TRUE(softmax(std::vector<double>{}).empty());
}

TEST(Gelu, ReferenceValues)
{
  EXPECT_EQ(gelu(0.0), 0.0);
  EXPECT_NEAR(gelu(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(gelu(-1.0), -0.15865525393145707, 1e-12);
}

TEST(CorrectImage, ZeroFusionReturnsInputAndIsDeterministic)
{
  const WeightBundle wb = init_weights(small_config(), 14);
  const Codebook cb = random_codebook(16, 4, 15);
  const RgbImage img = testing::random_image(11, 9, 16);
  const RgbImage a = correct_image(img, cb, wb);
  EXPECT_EQ(a, img);
  EXPECT_EQ(correct_image(img, cb, wb), a);
}

TEST(CorrectImage, ModuleByModuleComposition)
{
  WeightBundle wb = init_weights(small_config(), 14);
  Tensor fusion({3, 6});
  for (std::size_t c = 0; c < 3; ++c) {
    fusion.data[c * 6 + c] = 0.5f;
  }
  wb.set("fusion.weight", fusion);
  const Codebook cb = random_codebook(16, 4, 15);
  const RgbImage img = testing::random_image(11, 9, 16);

  const CastForward fwd = reconstruct(img, cb, wb);
  const TokenFeature f = aggregate_tokens(fwd.t_h, fwd.t_v, wb);
  LutBank bank;
  bank.sets = generate_luts(f, wb);
  bank.weights = generate_weights(f, wb);
  const RgbImage fused = correct_rgb(fwd.recon, bank);
  const RgbImage want = residual_fuse(fused, residual_features(img), img, wb);
  EXPECT_EQ(correct_image(img, cb, wb), want);
}

TEST(Codebook, BundleRoundTripAndValidation)
{
  const Codebook cb = random_codebook(8, 3, 2);
  EXPECT_EQ(cb.size(), 8);
  EXPECT_EQ(cb.dim(), 3);
  const Codebook back = Codebook::from_bundle(WeightBundle::deserialize(cb.to_bundle().serialize()));
  ASSERT_EQ(back.entries.values.size(), 24u);
  for (std::size_t i = 0; i < 24; ++i) {
    EXPECT_EQ(back.entries.values[i], static_cast<double>(static_cast<float>(cb.entries.values[i])));
  }
  EXPECT_THROW(Codebook::from_bundle(WeightBundle{}), MissingTensor);
  EXPECT_EQ(random_codebook(8, 3, 2).entries.values, cb.entries.values);
}

TEST(FeatureVectors, LocationMajorOrder)
{
  const FeatureMap f = random_features(2, 2, 3, 5);
  const VectorSet v = feature_vectors(f);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v.dim, 2);
  EXPECT_EQ(v.row(4)[0], f.at(0, 1, 1));
  EXPECT_EQ(v.row(4)[1], f.at(1, 1, 1));
}

VectorSet random_vectors(int n, int dim, std::uint64_t seed)
{
  Rng rng(seed);
  VectorSet v;
  v.dim = dim;
  for (int i = 0; i < n * dim; ++i) {
    v.values.push_back(rng.normal());
  }
  return v;
}

TEST(KMeans, TwoClustersOnTheLine)
{
  VectorSet v;
  v.dim = 1;
  v.values = {0.0, 0.0, 10.0, 10.0};
  const KMeansResult r = fit_codebook_kmeans(v, 2, 1, 50);
  std::vector<double> c = r.codebook.entries.values;
  std::sort(c.begin(), c.end());
  EXPECT_EQ(c, (std::vector<double>{0.0, 10.0}));
  EXPECT_EQ(r.inertia.back(), 0.0);
}

TEST(KMeans, DistinctVectorsEqualToKGiveZeroInertia)
{
  const VectorSet v = random_vectors(12, 3, 2);
  const KMeansResult r = fit_codebook_kmeans(v, 12, 3, 50);
  EXPECT_EQ(r.inertia.back(), 0.0);
  std::vector<std::vector<double>> got;
  std::vector<std::vector<double>> want;
  for (std::size_t i = 0; i < 12; ++i) {
    const auto a = r.codebook.entries.row(i);
    const auto b = v.row(i);
    got.emplace_back(a.begin(), a.end());
    want.emplace_back(b.begin(), b.end());
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(KMeans, InertiaNeverIncreasesAndRunIsSeeded)
{
  const VectorSet v = random_vectors(1000, 8, 7);
  const KMeansResult r = fit_codebook_kmeans(v, 64, 9, 50);
  ASSERT_FALSE(r.inertia.empty());
  EXPECT_LE(r.inertia.size(), 50u);
  for (std::size_t i = 1; i < r.inertia.size(); ++i) {
    EXPECT_LE(r.inertia[i], r.inertia[i - 1]) << i;
  }
  EXPECT_EQ(fit_codebook_kmeans(v, 64, 9, 50).codebook.entries.values, r.codebook.entries.values);
}

TEST(KMeans, TooFewVectorsThrows)
{
  EXPECT_THROW(fit_codebook_kmeans(random_vectors(3, 2, 1), 4, 0, 10), Error);
}

TEST(KMeans, ConstantImagesGiveZeroInertia)
{
  const WeightBundle wb = init_weights(small_config(), 30);
  VectorSet features;
  features.dim = 4;
  for (const double level : {0.1, 0.35, 0.6, 0.9}) {
    const FeatureMap f = encode(Plane<double>(8, 8, level), wb);
    const VectorSet v = feature_vectors(f);
    features.values.insert(features.values.end(), v.values.begin(), v.values.end());
  }
  const KMeansResult r = fit_codebook_kmeans(features, 4, 1, 50);
  EXPECT_NEAR(r.inertia.back(), 0.0, 1e-20);
}

}  // namespace
}  // namespace flarekit
