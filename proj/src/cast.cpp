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

#include "flarekit/cast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "flarekit/color.hpp"
#include "flarekit/random.hpp"

namespace flarekit
{

namespace
{

using u32 = std::uint32_t;

std::string enc(int i) { return "encoder.conv" + std::to_string(i); }
std::string dec(int i) { return "decoder.conv" + std::to_string(i); }

struct ConvLayer
{
  const Tensor * weight;
  const Tensor * bias;
  int in_channels;
  int out_channels;
};

ConvLayer conv_layer(const WeightBundle & weights, const std::string & prefix, int in_c, int out_c)
{
  const u32 o = static_cast<u32>(out_c);
  const u32 i = static_cast<u32>(in_c);
  return {&weights.require(prefix + ".weight", {o, i, 3, 3}), &weights.require(prefix + ".bias", {o}),
          in_c, out_c};
}

int encoder_channels(const WeightBundle & weights)
{
  const Tensor & first = weights.require_rank(enc(0) + ".weight", 4);
  if (first.shape[0] == 0) {
    throw MissingTensor("tensor '" + enc(0) + ".weight' has zero output channels");
  }
  return static_cast<int>(first.shape[0]);
}

// 3x3 convolution, replicate padding of 1, output size ceil(H / stride).
FeatureMap conv3x3(const FeatureMap & in, const ConvLayer & layer, int stride, bool relu)
{
  const int out_h = (in.height + stride - 1) / stride;
  const int out_w = (in.width + stride - 1) / stride;
  FeatureMap out(layer.out_channels, out_h, out_w);

  std::vector<int> row_idx(static_cast<std::size_t>(out_h) * 3);
  std::vector<int> col_idx(static_cast<std::size_t>(out_w) * 3);
  for (int y = 0; y < out_h; ++y) {
    for (int k = 0; k < 3; ++k) {
      row_idx[static_cast<std::size_t>(y * 3 + k)] = std::clamp(y * stride + k - 1, 0, in.height - 1);
    }
  }
  for (int x = 0; x < out_w; ++x) {
    for (int k = 0; k < 3; ++k) {
      col_idx[static_cast<std::size_t>(x * 3 + k)] = std::clamp(x * stride + k - 1, 0, in.width - 1);
    }
  }

  for (int co = 0; co < layer.out_channels; ++co) {
    const double b = layer.bias->data[static_cast<std::size_t>(co)];
    double * dst = out.data.data() + out.index(co, 0, 0);
    std::fill(dst, dst + static_cast<std::size_t>(out_h) * static_cast<std::size_t>(out_w), b);
    for (int ci = 0; ci < layer.in_channels; ++ci) {
      const float * w =
        layer.weight->data.data() + (static_cast<std::size_t>(co) * layer.in_channels + ci) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const double wk = w[ky * 3 + kx];
          if (wk == 0.0) {
            continue;
          }
          for (int y = 0; y < out_h; ++y) {
            const double * src = in.data.data() + in.index(ci, row_idx[static_cast<std::size_t>(y * 3 + ky)], 0);
            double * d = dst + static_cast<std::size_t>(y) * static_cast<std::size_t>(out_w);
            for (int x = 0; x < out_w; ++x) {
              d[x] += wk * src[col_idx[static_cast<std::size_t>(x * 3 + kx)]];
            }
          }
        }
      }
    }
  }
  if (relu) {
    for (double & v : out.data) {
      v = std::max(v, 0.0);
    }
  }
  return out;
}

FeatureMap upsample2x(const FeatureMap & in)
{
  FeatureMap out(in.channels, in.height * 2, in.width * 2);
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        out.at(c, y, x) = in.at(c, y / 2, x / 2);
      }
    }
  }
  return out;
}

// y = W x + b for W of shape [out, in].
std::vector<double> linear(
  const std::vector<double> & x, const WeightBundle & weights, const std::string & prefix, int out_dim)
{
  const u32 in = static_cast<u32>(x.size());
  const u32 out = static_cast<u32>(out_dim);
  const Tensor & w = weights.require(prefix + ".weight", {out, in});
  const Tensor & b = weights.require(prefix + ".bias", {out});
  std::vector<double> y(static_cast<std::size_t>(out_dim));
  for (std::size_t r = 0; r < y.size(); ++r) {
    double acc = b.data[r];
    for (std::size_t c = 0; c < x.size(); ++c) {
      acc += static_cast<double>(w.data[r * x.size() + c]) * x[c];
    }
    y[r] = acc;
  }
  return y;
}

void check_feature(const TokenFeature & feature, const CastDims & dims)
{
  if (static_cast<int>(feature.size()) != dims.hidden_dim) {
    throw ShapeError(
      "token feature has length " + std::to_string(feature.size()) + ", expected " +
      std::to_string(dims.hidden_dim));
  }
}

}  // namespace

void CastConfig::validate() const
{
  if (channels < 1 || hidden_dim < 1 || n_l < 1 || s_lut < 2 || codebook_size < 2 || vocab_size < 0) {
    throw Error("invalid CAST configuration");
  }
  if (vocab_size != 0 && vocab_size < codebook_size) {
    throw Error("token embedding table must cover every codebook entry");
  }
}

CastDims infer_dims(const WeightBundle & weights)
{
  CastDims dims;
  dims.channels = encoder_channels(weights);
  const u32 c = static_cast<u32>(dims.channels);
  weights.require(enc(0) + ".weight", {c, 1, 3, 3});
  weights.require(enc(0) + ".bias", {c});
  for (int i = 1; i < 4; ++i) {
    weights.require(enc(i) + ".weight", {c, c, 3, 3});
    weights.require(enc(i) + ".bias", {c});
  }
  for (int i = 0; i < 3; ++i) {
    weights.require(dec(i) + ".weight", {c, c, 3, 3});
    weights.require(dec(i) + ".bias", {c});
  }
  weights.require(dec(3) + ".weight", {1, c, 3, 3});
  weights.require(dec(3) + ".bias", {1});

  const Tensor & emb = weights.require_rank("token_embedding", 2);
  dims.vocab_size = static_cast<int>(emb.shape[0]);
  dims.hidden_dim = static_cast<int>(emb.shape[1]);
  const u32 hidden = emb.shape[1];
  weights.require("lut_gen.fc1.weight", {hidden, hidden});
  weights.require("lut_gen.fc1.bias", {hidden});

  dims.weight_hidden = std::max(1, dims.hidden_dim / 4);
  const u32 wh = static_cast<u32>(dims.weight_hidden);
  weights.require("weight_gen.fc1.weight", {wh, hidden});
  weights.require("weight_gen.fc1.bias", {wh});
  const Tensor & wfc2 = weights.require_rank("weight_gen.fc2.weight", 2);
  dims.n_l = static_cast<int>(wfc2.shape[0]);
  if (dims.n_l < 1) {
    throw MissingTensor("tensor 'weight_gen.fc2.weight' declares zero LUT sets");
  }
  weights.require("weight_gen.fc2.weight", {static_cast<u32>(dims.n_l), wh});
  weights.require("weight_gen.fc2.bias", {static_cast<u32>(dims.n_l)});

  const Tensor & lfc2 = weights.require_rank("lut_gen.fc2.weight", 2);
  const u32 rows = lfc2.shape[0];
  const u32 per_set = 3 * static_cast<u32>(dims.n_l);
  if (rows % per_set != 0 || rows / per_set < 2) {
    throw MissingTensor(
      "tensor 'lut_gen.fc2.weight' has " + std::to_string(rows) +
      " rows, expected N_L * 3 * S_LUT with S_LUT >= 2");
  }
  dims.s_lut = static_cast<int>(rows / per_set);
  weights.require("lut_gen.fc2.weight", {rows, hidden});
  weights.require("lut_gen.fc2.bias", {rows});

  weights.require("fusion.weight", {3, 6});
  weights.require("fusion.bias", {3});
  return dims;
}

WeightBundle Codebook::to_bundle() const
{
  Tensor t({static_cast<u32>(size()), static_cast<u32>(dim())});
  for (std::size_t i = 0; i < entries.values.size(); ++i) {
    t.data[i] = static_cast<float>(entries.values[i]);
  }
  WeightBundle bundle;
  bundle.set("codebook", std::move(t));
  return bundle;
}

Codebook Codebook::from_bundle(const WeightBundle & bundle)
{
  const Tensor & t = bundle.require_rank("codebook", 2);
  if (t.shape[0] < 2 || t.shape[1] < 1) {
    throw MissingTensor("tensor 'codebook' must be [K >= 2, D >= 1], got " + t.shape_string());
  }
  Codebook cb;
  cb.entries.dim = static_cast<int>(t.shape[1]);
  cb.entries.values.assign(t.data.begin(), t.data.end());
  for (const double v : cb.entries.values) {
    if (std::isnan(v)) {
      throw Error("codebook contains NaN entries");
    }
  }
  return cb;
}

FeatureMap encode(const Plane<double> & plane, const WeightBundle & weights)
{
  if (plane.empty()) {
    throw Error("cannot encode an empty plane");
  }
  const int c = encoder_channels(weights);
  FeatureMap x(1, plane.height(), plane.width());
  std::copy(plane.begin(), plane.end(), x.data.begin());
  x = conv3x3(x, conv_layer(weights, enc(0), 1, c), 2, true);
  x = conv3x3(x, conv_layer(weights, enc(1), c, c), 1, true);
  x = conv3x3(x, conv_layer(weights, enc(2), c, c), 2, true);
  return conv3x3(x, conv_layer(weights, enc(3), c, c), 1, false);
}

Plane<double> decode(
  const FeatureMap & quantized, const WeightBundle & weights, int out_width, int out_height)
{
  const int c = quantized.channels;
  if (out_width > quantized.width * 4 || out_height > quantized.height * 4) {
    throw ShapeError("decode target is larger than 4x the feature map");
  }
  FeatureMap x = conv3x3(quantized, conv_layer(weights, dec(0), c, c), 1, true);
  x = conv3x3(upsample2x(x), conv_layer(weights, dec(1), c, c), 1, true);
  x = conv3x3(x, conv_layer(weights, dec(2), c, c), 1, true);
  x = conv3x3(upsample2x(x), conv_layer(weights, dec(3), c, 1), 1, false);

  Plane<double> out(out_width, out_height);
  for (int y = 0; y < out_height; ++y) {
    for (int xx = 0; xx < out_width; ++xx) {
      out(xx, y) = std::clamp(x.at(0, y, xx), 0.0, 1.0);
    }
  }
  return out;
}

VqResult vq_quantize(const FeatureMap & features, const Codebook & codebook)
{
  if (codebook.dim() != features.channels) {
    throw ShapeError(
      "codebook dimension " + std::to_string(codebook.dim()) + " does not match " +
      std::to_string(features.channels) + " feature channels");
  }
  VqResult result{TokenGrid(features.width, features.height),
                  FeatureMap(features.channels, features.height, features.width)};
  const std::size_t d = static_cast<std::size_t>(features.channels);
  std::vector<double> f(d);
  for (int y = 0; y < features.height; ++y) {
    for (int x = 0; x < features.width; ++x) {
      for (std::size_t c = 0; c < d; ++c) {
        f[c] = features.at(static_cast<int>(c), y, x);
      }
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int k = 0; k < codebook.size(); ++k) {
        const auto e = codebook.entries.row(static_cast<std::size_t>(k));
        double dist = 0.0;
        for (std::size_t c = 0; c < d && dist < best_dist; ++c) {
          const double diff = f[c] - e[c];
          dist += diff * diff;
        }
        if (dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      result.tokens(x, y) = best;
      const auto e = codebook.entries.row(static_cast<std::size_t>(best));
      for (std::size_t c = 0; c < d; ++c) {
        result.quantized.at(static_cast<int>(c), y, x) = e[c];
      }
    }
  }
  return result;
}

double commitment_loss(const FeatureMap & features, const FeatureMap & quantized)
{
  if (!features.same_shape(quantized)) {
    throw ShapeError("commitment_loss: feature map shapes differ");
  }
  if (features.data.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < features.data.size(); ++i) {
    const double d = features.data[i] - quantized.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(features.data.size());
}

CastForward reconstruct(const RgbImage & img, const Codebook & codebook, const WeightBundle & weights)
{
  const HsvImage hsv = rgb_to_hsv(img);
  Plane<double> hue(img.width(), img.height());
  for (std::size_t i = 0; i < hue.size(); ++i) {
    hue[i] = hsv.h[i] / 360.0;
  }

  CastForward fwd;
  fwd.f_h = encode(hue, weights);
  fwd.f_v = encode(hsv.v, weights);
  VqResult vq_h = vq_quantize(fwd.f_h, codebook);
  VqResult vq_v = vq_quantize(fwd.f_v, codebook);
  fwd.t_h = std::move(vq_h.tokens);
  fwd.t_v = std::move(vq_v.tokens);
  fwd.q_h = std::move(vq_h.quantized);
  fwd.q_v = std::move(vq_v.quantized);

  const Plane<double> h_hat = decode(fwd.q_h, weights, img.width(), img.height());
  fwd.recon_hsv.h = Plane<double>(img.width(), img.height());
  for (std::size_t i = 0; i < h_hat.size(); ++i) {
    fwd.recon_hsv.h[i] = wrap_degrees(h_hat[i] * 360.0);
  }
  fwd.recon_hsv.s = hsv.s;
  fwd.recon_hsv.v = decode(fwd.q_v, weights, img.width(), img.height());
  fwd.recon = hsv_to_rgb(fwd.recon_hsv);
  return fwd;
}

TokenFeature aggregate_tokens(const TokenGrid & t_h, const TokenGrid & t_v, const WeightBundle & weights)
{
  const Tensor & emb = weights.require_rank("token_embedding", 2);
  const std::size_t vocab = emb.shape[0];
  const std::size_t hidden = emb.shape[1];
  const std::size_t count = t_h.size() + t_v.size();
  if (count == 0) {
    throw Error("cannot aggregate empty token grids");
  }
  TokenFeature f(hidden, 0.0);
  for (const TokenGrid * grid : {&t_h, &t_v}) {
    for (const std::int32_t token : *grid) {
      if (token < 0 || static_cast<std::size_t>(token) >= vocab) {
        throw Error(
          "token " + std::to_string(token) + " is outside the embedding table of size " +
          std::to_string(vocab));
      }
      const float * row = emb.data.data() + static_cast<std::size_t>(token) * hidden;
      for (std::size_t j = 0; j < hidden; ++j) {
        f[j] += row[j];
      }
    }
  }
  for (double & v : f) {
    v /= static_cast<double>(count);
  }
  return f;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

std::vector<LutSet> generate_luts(const TokenFeature & feature, const WeightBundle & weights)
{
  const CastDims dims = infer_dims(weights);
  check_feature(feature, dims);
  std::vector<double> hidden = linear(feature, weights, "lut_gen.fc1", dims.hidden_dim);
  for (double & v : hidden) {
    v = gelu(v);
  }
  const std::vector<double> raw = linear(hidden, weights, "lut_gen.fc2", dims.n_l * 3 * dims.s_lut);

  const std::size_t s = static_cast<std::size_t>(dims.s_lut);
  std::vector<LutSet> sets;
  sets.reserve(static_cast<std::size_t>(dims.n_l));
  for (std::size_t i = 0; i < static_cast<std::size_t>(dims.n_l); ++i) {
    std::vector<double> curves[3];
    for (std::size_t c = 0; c < 3; ++c) {
      curves[c].resize(s);
      for (std::size_t k = 0; k < s; ++k) {
        const double z = raw[(i * 3 + c) * s + k];
        curves[c][k] = 1.0 / (1.0 + std::exp(-z));
      }
    }
    sets.push_back(
      {Lut1D(std::move(curves[0]), LutDomain::kCircular), Lut1D(std::move(curves[1]), LutDomain::kLinear),
       Lut1D(std::move(curves[2]), LutDomain::kLinear)});
  }
  return sets;
}

std::vector<double> softmax(std::span<const double> logits)
{
  if (logits.empty()) {
    return {};
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double & v : out) {
    v /= total;
  }
  return out;
}

std::vector<double> generate_weights(const TokenFeature & feature, const WeightBundle & weights)
{
  const CastDims dims = infer_dims(weights);
  check_feature(feature, dims);
  std::vector<double> hidden = linear(feature, weights, "weight_gen.fc1", dims.weight_hidden);
  for (double & v : hidden) {
    v = gelu(v);
  }
  return softmax(linear(hidden, weights, "weight_gen.fc2", dims.n_l));
}

RgbImage correct_image(const RgbImage & img, const Codebook & codebook, const WeightBundle & weights)
{
  infer_dims(weights);
  const CastForward fwd = reconstruct(img, codebook, weights);
  const TokenFeature feature = aggregate_tokens(fwd.t_h, fwd.t_v, weights);
  LutBank bank;
  bank.sets = generate_luts(feature, weights);
  bank.weights = generate_weights(feature, weights);
  const RgbImage fused = hsv_to_rgb(correct_hsv(rgb_to_hsv(fwd.recon), bank));
  return residual_fuse(fused, residual_features(img), img, weights);
}

VectorSet feature_vectors(const FeatureMap & features)
{
  VectorSet set;
  set.dim = features.channels;
  set.values.reserve(features.data.size());
  for (int y = 0; y < features.height; ++y) {
    for (int x = 0; x < features.width; ++x) {
      for (int c = 0; c < features.channels; ++c) {
        set.values.push_back(features.at(c, y, x));
      }
    }
  }
  return set;
}

WeightBundle init_weights(const CastConfig & config, std::uint64_t seed)
{
  config.validate();
  Rng rng(seed);
  WeightBundle bundle;
  auto gaussian = [&](const std::string & name, std::vector<u32> shape, double stddev) {
    Tensor t(std::move(shape));
    for (float & v : t.data) {
      v = static_cast<float>(stddev * rng.normal());
    }
    bundle.set(name, std::move(t));
  };
  auto zeros = [&](const std::string & name, std::vector<u32> shape) {
    bundle.set(name, Tensor(std::move(shape)));
  };

  const u32 c = static_cast<u32>(config.channels);
  const u32 hidden = static_cast<u32>(config.hidden_dim);
  const u32 wh = static_cast<u32>(std::max(1, config.hidden_dim / 4));
  const u32 n_l = static_cast<u32>(config.n_l);
  const u32 lut_params = n_l * 3 * static_cast<u32>(config.s_lut);
  const u32 vocab = static_cast<u32>(config.vocab_size == 0 ? config.codebook_size : config.vocab_size);

  // He initialization for the ReLU convolutions.
  for (int i = 0; i < 4; ++i) {
    const u32 in = i == 0 ? 1 : c;
    gaussian(enc(i) + ".weight", {c, in, 3, 3}, std::sqrt(2.0 / (9.0 * in)));
    zeros(enc(i) + ".bias", {c});
  }
  for (int i = 0; i < 4; ++i) {
    const u32 out = i == 3 ? 1 : c;
    gaussian(dec(i) + ".weight", {out, c, 3, 3}, std::sqrt(2.0 / (9.0 * c)));
    zeros(dec(i) + ".bias", {out});
  }
  gaussian("token_embedding", {vocab, hidden}, 1.0);
  gaussian("lut_gen.fc1.weight", {hidden, hidden}, 1.0 / std::sqrt(static_cast<double>(hidden)));
  zeros("lut_gen.fc1.bias", {hidden});
  gaussian("lut_gen.fc2.weight", {lut_params, hidden}, 1.0 / std::sqrt(static_cast<double>(hidden)));
  zeros("lut_gen.fc2.bias", {lut_params});
  gaussian("weight_gen.fc1.weight", {wh, hidden}, 1.0 / std::sqrt(static_cast<double>(hidden)));
  zeros("weight_gen.fc1.bias", {wh});
  gaussian("weight_gen.fc2.weight", {n_l, wh}, 1.0 / std::sqrt(static_cast<double>(wh)));
  zeros("weight_gen.fc2.bias", {n_l});
  if (config.zero_fusion) {
    zeros("fusion.weight", {3, 6});
  } else {
    gaussian("fusion.weight", {3, 6}, 0.1);
  }
  zeros("fusion.bias", {3});
  return bundle;
}

Codebook random_codebook(int size, int dim, std::uint64_t seed)
{
  if (size < 2 || dim < 1) {
    throw Error("codebook must be at least 2 x 1");
  }
  Rng rng(seed);
  Codebook cb;
  cb.entries.dim = dim;
  cb.entries.values.resize(static_cast<std::size_t>(size) * static_cast<std::size_t>(dim));
  for (double & v : cb.entries.values) {
    // Stored as f32; round now so the in-memory and on-disk codebooks agree.
    v = static_cast<float>(rng.normal());
  }
  return cb;
}

}  // namespace flarekit
