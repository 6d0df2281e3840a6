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

#ifndef FLAREKIT__LOSSES_HPP_
#define FLAREKIT__LOSSES_HPP_

#include <utility>
#include <vector>

#include "flarekit/cast.hpp"
#include "flarekit/image.hpp"

namespace flarekit
{

struct LossWeights
{
  double l1 = 1.0;
  double perceptual = 0.1;
  double flare = 2.0;
  double commitment = 0.1;

  void validate() const;
};

struct LossBreakdown
{
  double l1 = 0.0;
  double perceptual = 0.0;
  double flare = 0.0;
  double commitment = 0.0;
  double total = 0.0;
};

/// Triangular weight: 1 at 300 degrees, falling linearly to 0 at 260 and 340.
double purple_hue_weight(double hue_degrees);

/// S * purple_hue_weight(H) per pixel.
SoftMask purple_weight_map(const RgbImage & img);

/// Sobel magnitude of the luma divided by its largest possible value, so
/// the map lies in [0,1].
SoftMask edge_map(const RgbImage & img);

/// Penalty mask: purple_weight_map * edge_map.
SoftMask penalty_mask(const RgbImage & img);

/// Mean absolute difference over all channel samples.
double l1_loss(const RgbImage & a, const RgbImage & b);

/// Mean over all channel samples of M * |out - gt| (M broadcast).
double flare_suppression_loss(const RgbImage & out, const RgbImage & gt, const SoftMask & mask);

/// One pyramid step: separable [1 4 6 4 1] / 16 blur with edge replication,
/// then every second pixel (output size ceil(n / 2)).
GrayImage pyr_down(const GrayImage & img);

/// Transpose of pyr_down: maps a gradient on the coarse grid back onto the
/// fine grid of the given size.
GrayImage pyr_down_adjoint(const GrayImage & coarse_grad, int fine_width, int fine_height);

inline constexpr int kProxyLevels = 3;

/// Luma pyramid at 1x, 1/2x and 1/4x.
std::vector<GrayImage> luma_pyramid(const RgbImage & img);

/// Average over the pyramid levels of the per-level mean |luma_a - luma_b|.
/// Stands in for the VGG feature distance.
double perceptual_proxy(const RgbImage & a, const RgbImage & b);

/// Image terms of the composite loss (commitment left at 0) with a
/// caller-supplied penalty mask.
LossBreakdown image_loss(
  const RgbImage & out, const RgbImage & gt, const SoftMask & penalty, const LossWeights & weights);

/// Weighted composite loss. The penalty mask is derived from gt; the
/// commitment term is the mean over the given (raw, quantized) pairs and is
/// zero when none are given.
LossBreakdown total_loss(
  const RgbImage & out, const RgbImage & gt,
  const std::vector<std::pair<const FeatureMap *, const FeatureMap *>> & features,
  const LossWeights & weights);

LossBreakdown total_loss(
  const RgbImage & out, const RgbImage & gt, const FeatureMap & features, const FeatureMap & quantized,
  const LossWeights & weights);

}  // namespace flarekit

#endif  // FLAREKIT__LOSSES_HPP_
