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

#ifndef FLAREKIT__CAST_HPP_
#define FLAREKIT__CAST_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "flarekit/image.hpp"
#include "flarekit/lut.hpp"
#include "flarekit/weight_bundle.hpp"

namespace flarekit
{

/// C x H' x W' activations, channel-major.
struct FeatureMap
{
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w)
  : channels(c), height(h), width(w),
    data(static_cast<std::size_t>(c) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w))
  {
  }

  double & at(int c, int y, int x) { return data[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data[index(c, y, x)]; }
  std::size_t index(int c, int y, int x) const
  {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height) +
            static_cast<std::size_t>(y)) *
             static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  bool same_shape(const FeatureMap & o) const
  {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

/// Row-major set of `dim`-length vectors (k-means input, codebook rows).
struct VectorSet
{
  int dim = 0;
  std::vector<double> values;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / static_cast<std::size_t>(dim); }
  std::span<const double> row(std::size_t i) const
  {
    return {values.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  void push_back(std::span<const double> v) { values.insert(values.end(), v.begin(), v.end()); }
};

/// K x D embedding table. Serialized as tensor "codebook" [K, D].
struct Codebook
{
  VectorSet entries;

  int size() const { return static_cast<int>(entries.size()); }
  int dim() const { return entries.dim; }

  WeightBundle to_bundle() const;
  static Codebook from_bundle(const WeightBundle & bundle);
};

using TokenGrid = Plane<std::int32_t>;
using TokenFeature = std::vector<double>;

/// Network sizes. Consumers infer them from tensor shapes; this struct
/// drives seeded initialization.
struct CastConfig
{
  int channels = 128;
  int hidden_dim = 128;
  int n_l = kDefaultLutSets;
  int s_lut = kDefaultLutSize;
  int codebook_size = 4096;
  /// Rows of the token embedding table; 0 means codebook_size.
  int vocab_size = 0;
  /// Zero fusion weights make the full pipeline return its input unchanged.
  bool zero_fusion = true;

  void validate() const;
};

/// Sizes recovered from a bundle; every tensor is checked on the way.
struct CastDims
{
  int channels = 0;
  int hidden_dim = 0;
  int weight_hidden = 0;
  int n_l = 0;
  int s_lut = 0;
  int vocab_size = 0;
};
CastDims infer_dims(const WeightBundle & weights);

/// Four 3x3 convolutions (strides 2, 1, 2, 1), replicate padding, ReLU
/// between layers. Tensors encoder.conv{0..3}.{weight,bias}. The same
/// weights serve both the hue and the value plane.
FeatureMap encode(const Plane<double> & plane, const WeightBundle & weights);

/// Mirror of the encoder: conv, up2x + conv, conv, up2x + conv (to one
/// channel), ReLU between layers, output clamped to [0,1] and cropped to
/// out_width x out_height. Tensors decoder.conv{0..3}.{weight,bias}.
Plane<double> decode(
  const FeatureMap & quantized, const WeightBundle & weights, int out_width, int out_height);

struct VqResult
{
  TokenGrid tokens;
  FeatureMap quantized;
};

/// Nearest codebook entry per location (Euclidean, ties to the lowest index).
VqResult vq_quantize(const FeatureMap & features, const Codebook & codebook);

/// Mean squared difference between raw and quantized features.
double commitment_loss(const FeatureMap & features, const FeatureMap & quantized);

struct CastForward
{
  RgbImage recon;
  HsvImage recon_hsv;  ///< decoded H and V with the input S plane untouched
  TokenGrid t_h;
  TokenGrid t_v;
  FeatureMap f_h;
  FeatureMap f_v;
  FeatureMap q_h;
  FeatureMap q_v;
};

CastForward reconstruct(const RgbImage & img, const Codebook & codebook, const WeightBundle & weights);

/// Embedding lookup (token_embedding [V, hidden]) averaged over both grids.
TokenFeature aggregate_tokens(const TokenGrid & t_h, const TokenGrid & t_v, const WeightBundle & weights);

/// Linear -> GELU -> Linear -> sigmoid, reshaped set-major as
/// [set][H, S, V][control point]. Tensors lut_gen.fc{1,2}.{weight,bias}.
std::vector<LutSet> generate_luts(const TokenFeature & feature, const WeightBundle & weights);

/// Linear (hidden -> hidden / 4) -> GELU -> Linear (-> N_L) -> softmax.
/// Tensors weight_gen.fc{1,2}.{weight,bias}.
std::vector<double> generate_weights(const TokenFeature & feature, const WeightBundle & weights);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Exact (erf) GELU.
double gelu(double x);

/// End-to-end correction: reconstruct, tokens -> LUT bank, correct the
/// reconstruction in HSV, then fuse with the original's residual features.
RgbImage correct_image(const RgbImage & img, const Codebook & codebook, const WeightBundle & weights);

/// Per-location feature vectors of a map, in (y, x) order.
VectorSet feature_vectors(const FeatureMap & features);

/// Seeded random network weights for the given sizes (the codebook is not
/// included).
WeightBundle init_weights(const CastConfig & config, std::uint64_t seed);

/// Seeded Gaussian codebook, used when no images are available for k-means.
Codebook random_codebook(int size, int dim, std::uint64_t seed);

struct KMeansResult
{
  Codebook codebook;
  std::vector<double> inertia;  ///< one entry per assignment step
};

/// k-means++ seeding then Lloyd iterations; empty clusters are re-seeded
/// from the point farthest from its centroid. Stops after max_iters
/// assignment steps or when the relative inertia change drops below 1e-6.
KMeansResult fit_codebook_kmeans(const VectorSet & features, int k, std::uint64_t seed, int max_iters);

}  // namespace flarekit

#endif  // FLAREKIT__CAST_HPP_
