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

#include "flarekit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flarekit/color.hpp"
#include "flarekit/metrics.hpp"
#include "flarekit/synthesis.hpp"

namespace flarekit
{

namespace
{

constexpr double kBinomial[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

// Largest Sobel magnitude a [0,1] image can produce on the 0-255 scale.
const double kSobelMax = 255.0 * 4.0 * std::numbers::sqrt2;

double mean_abs(const GrayImage & a, const GrayImage & b)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::fabs(a[i] - b[i]);
  }
  return a.empty() ? 0.0 : acc / static_cast<double>(a.size());
}

}  // namespace

void LossWeights::validate() const
{
  for (const double w : {l1, perceptual, flare, commitment}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("loss weights must be finite and non-negative");
    }
  }
}

double purple_hue_weight(double hue_degrees)
{
  const double center = 0.5 * (kPurpleHueLow + kPurpleHueHigh);
  const double half = 0.5 * (kPurpleHueHigh - kPurpleHueLow);
  return std::max(0.0, 1.0 - std::fabs(hue_degrees - center) / half);
}

SoftMask purple_weight_map(const RgbImage & img)
{
  SoftMask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Hsv p = rgb_to_hsv(img[i]);
    out[i] = p.s * purple_hue_weight(p.h);
  }
  return out;
}

SoftMask edge_map(const RgbImage & img)
{
  if (img.width() < 3 || img.height() < 3) {
    return SoftMask(img.width(), img.height());
  }
  SoftMask g = sobel_magnitude(grayscale(img));
  for (double & v : g) {
    v = std::min(1.0, v / kSobelMax);
  }
  return g;
}

SoftMask penalty_mask(const RgbImage & img)
{
  const SoftMask purple = purple_weight_map(img);
  SoftMask out = edge_map(img);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= purple[i];
  }
  return out;
}

double l1_loss(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "l1_loss");
  if (a.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::fabs(a[i].r - b[i].r) + std::fabs(a[i].g - b[i].g) + std::fabs(a[i].b - b[i].b);
  }
  return acc / (3.0 * static_cast<double>(a.size()));
}

double flare_suppression_loss(const RgbImage & out, const RgbImage & gt, const SoftMask & mask)
{
  require_same_shape(out, gt, "flare_suppression_loss");
  require_same_shape(out, mask, "flare_suppression_loss");
  if (out.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    acc += mask[i] *
           (std::fabs(out[i].r - gt[i].r) + std::fabs(out[i].g - gt[i].g) + std::fabs(out[i].b - gt[i].b));
  }
  return acc / (3.0 * static_cast<double>(out.size()));
}

GrayImage pyr_down(const GrayImage & img)
{
  const int w = (img.width() + 1) / 2;
  const int h = (img.height() + 1) / 2;
  GrayImage horizontal(w, img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) {
        acc += kBinomial[k + 2] * img.clamped(2 * x + k, y);
      }
      horizontal(x, y) = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) {
        acc += kBinomial[k + 2] * horizontal.clamped(x, 2 * y + k);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

GrayImage pyr_down_adjoint(const GrayImage & coarse_grad, int fine_width, int fine_height)
{
  if (coarse_grad.width() != (fine_width + 1) / 2 || coarse_grad.height() != (fine_height + 1) / 2) {
    throw ShapeError("pyr_down_adjoint: coarse grid does not match the fine size");
  }
  // Vertical pass first (reverse order of pyr_down), scattering into the
  // clamped source rows and columns.
  GrayImage horizontal(coarse_grad.width(), fine_height);
  for (int y = 0; y < coarse_grad.height(); ++y) {
    for (int x = 0; x < coarse_grad.width(); ++x) {
      const double g = coarse_grad(x, y);
      for (int k = -2; k <= 2; ++k) {
        const int sy = std::clamp(2 * y + k, 0, fine_height - 1);
        horizontal(x, sy) += kBinomial[k + 2] * g;
      }
    }
  }
  GrayImage out(fine_width, fine_height);
  for (int y = 0; y < fine_height; ++y) {
    for (int x = 0; x < coarse_grad.width(); ++x) {
      const double g = horizontal(x, y);
      for (int k = -2; k <= 2; ++k) {
        const int sx = std::clamp(2 * x + k, 0, fine_width - 1);
        out(sx, y) += kBinomial[k + 2] * g;
      }
    }
  }
  return out;
}

std::vector<GrayImage> luma_pyramid(const RgbImage & img)
{
  std::vector<GrayImage> levels;
  levels.push_back(grayscale(img));
  for (int l = 1; l < kProxyLevels; ++l) {
    levels.push_back(pyr_down(levels.back()));
  }
  return levels;
}

double perceptual_proxy(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "perceptual_proxy");
  const auto pa = luma_pyramid(a);
  const auto pb = luma_pyramid(b);
  double acc = 0.0;
  for (std::size_t l = 0; l < pa.size(); ++l) {
    acc += mean_abs(pa[l], pb[l]);
  }
  return acc / static_cast<double>(pa.size());
}

namespace
{

double weighted_total(const LossBreakdown & loss, const LossWeights & weights)
{
  return weights.l1 * loss.l1 + weights.perceptual * loss.perceptual + weights.flare * loss.flare +
         weights.commitment * loss.commitment;
}

}  // namespace

LossBreakdown image_loss(
  const RgbImage & out, const RgbImage & gt, const SoftMask & penalty, const LossWeights & weights)
{
  LossBreakdown loss;
  loss.l1 = l1_loss(out, gt);
  loss.perceptual = perceptual_proxy(out, gt);
  loss.flare = flare_suppression_loss(out, gt, penalty);
  loss.total = weighted_total(loss, weights);
  return loss;
}

LossBreakdown total_loss(
  const RgbImage & out, const RgbImage & gt,
  const std::vector<std::pair<const FeatureMap *, const FeatureMap *>> & features,
  const LossWeights & weights)
{
  weights.validate();
  LossBreakdown loss = image_loss(out, gt, penalty_mask(gt), weights);
  if (!features.empty()) {
    for (const auto & [raw, quantized] : features) {
      loss.commitment += commitment_loss(*raw, *quantized);
    }
    loss.commitment /= static_cast<double>(features.size());
  }
  loss.total = weighted_total(loss, weights);
  return loss;
}

LossBreakdown total_loss(
  const RgbImage & out, const RgbImage & gt, const FeatureMap & features, const FeatureMap & quantized,
  const LossWeights & weights)
{
  return total_loss(out, gt, {{&features, &quantized}}, weights);
}

}  // namespace flarekit
