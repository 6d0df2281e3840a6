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

#include "flarekit/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "flarekit/color.hpp"
#include "flarekit/random.hpp"

namespace flarekit
{

void SynthParams::validate() const
{
  if (!(highlight_pct > 0.0 && highlight_pct <= 100.0)) {
    throw Error("highlight_pct must be in (0,100]");
  }
  if (!(grad_thresh >= 0.0)) {
    throw Error("grad_thresh must be >= 0");
  }
  if (edge_width < 1) {
    throw Error("edge_width must be >= 1");
  }
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw Error("strength must be in [0,1]");
  }
  if (!(gamma > 0.0)) {
    throw Error("gamma must be > 0");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw Error("jitter must be in [0,1)");
  }
  for (const double c : {purple.r, purple.g, purple.b}) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error("purple color channels must be in [0,1]");
    }
  }
}

int effective_edge_width(int edge_width, int width, int height)
{
  const int cap = std::max(1, std::min(width, height) / 8);
  return std::clamp(edge_width, 1, cap);
}

double percentile_threshold(const GrayImage & img, double pct)
{
  if (img.empty()) {
    throw Error("percentile of an empty image");
  }
  if (!(pct > 0.0 && pct <= 100.0)) {
    throw Error("percentile must be in (0,100]");
  }
  const std::size_t n = img.size();
  // The small slack keeps e.g. 99 * 100 / 100 from rounding up past 99.
  const double rank = std::ceil(pct / 100.0 * static_cast<double>(n) - 1e-9);
  const std::size_t k =
    std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)), 1, n) - 1;
  std::vector<double> values(img.begin(), img.end());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

BinaryMask bright_mask(const GrayImage & img, double threshold)
{
  BinaryMask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = img[i] > threshold ? 1 : 0;
  }
  return out;
}

SoftMask sobel_magnitude(const GrayImage & img)
{
  if (img.width() < 3 || img.height() < 3) {
    throw Error("sobel_magnitude needs an image of at least 3x3");
  }
  SoftMask out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double tl = img.clamped(x - 1, y - 1), tc = img.clamped(x, y - 1),
                   tr = img.clamped(x + 1, y - 1);
      const double ml = img.clamped(x - 1, y), mr = img.clamped(x + 1, y);
      const double bl = img.clamped(x - 1, y + 1), bc = img.clamped(x, y + 1),
                   br = img.clamped(x + 1, y + 1);
      const double gx = 255.0 * ((tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl));
      const double gy = 255.0 * ((bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr));
      out(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

BinaryMask edge_mask(const SoftMask & gradient, double threshold)
{
  BinaryMask out(gradient.width(), gradient.height());
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    out[i] = gradient[i] > threshold ? 1 : 0;
  }
  return out;
}

BinaryMask candidate_flare_mask(const BinaryMask & bright, const BinaryMask & edge)
{
  require_same_shape(bright, edge, "candidate_flare_mask");
  BinaryMask out(bright.width(), bright.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (bright[i] != 0 && edge[i] != 0) ? 1 : 0;
  }
  return out;
}

BinaryMask ellipse_element(int size)
{
  if (size < 1) {
    throw Error("structuring element size must be >= 1");
  }
  BinaryMask element(size, size);
  const double half = size / 2.0;
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      const double dx = (i + 0.5 - half) / half;
      const double dy = (j + 0.5 - half) / half;
      element(i, j) = dx * dx + dy * dy <= 1.0 ? 1 : 0;
    }
  }
  return element;
}

BinaryMask dilate_ellipse(const BinaryMask & mask, int size)
{
  const BinaryMask element = ellipse_element(size);
  const int anchor = size / 2;
  std::vector<std::pair<int, int>> offsets;
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      if (element(i, j) != 0) {
        offsets.emplace_back(i - anchor, j - anchor);
      }
    }
  }

  // Scatter form of the gather definition: a set source pixel s reaches
  // every destination s - offset.
  BinaryMask out(mask.width(), mask.height());
  for (int sy = 0; sy < mask.height(); ++sy) {
    for (int sx = 0; sx < mask.width(); ++sx) {
      if (mask(sx, sy) == 0) {
        continue;
      }
      for (const auto & [ox, oy] : offsets) {
        const int dx = sx - ox;
        const int dy = sy - oy;
        if (dx >= 0 && dy >= 0 && dx < mask.width() && dy < mask.height()) {
          out(dx, dy) = 1;
        }
      }
    }
  }
  return out;
}

SoftMask gaussian_blur(const SoftMask & mask, double sigma)
{
  if (!(sigma > 0.0)) {
    throw Error("gaussian_blur sigma must be > 0");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    const double w = std::exp(-(d * d) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(d + radius)] = w;
    total += w;
  }
  for (auto & w : kernel) {
    w /= total;
  }

  SoftMask horizontal(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] * mask.clamped(x + d, y);
      }
      horizontal(x, y) = acc;
    }
  }
  SoftMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] * horizontal.clamped(x, y + d);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

SoftMask gaussian_blur(const BinaryMask & mask, double sigma)
{
  SoftMask soft(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    soft[i] = mask[i] != 0 ? 1.0 : 0.0;
  }
  return gaussian_blur(soft, sigma);
}

SoftMask radial_falloff(int width, int height, double gamma)
{
  if (!(gamma > 0.0)) {
    throw Error("radial_falloff gamma must be > 0");
  }
  SoftMask out(width, height);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double dist_max = std::hypot(cx, cy);
  if (dist_max <= 0.0) {
    return out;
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r = std::min(1.0, std::hypot(x - cx, y - cy) / dist_max);
      out(x, y) = std::pow(r, gamma);
    }
  }
  return out;
}

SoftMask alpha_mask(const SoftMask & band, const SoftMask & radial, double strength)
{
  require_same_shape(band, radial, "alpha_mask");
  const double peak = band.empty() ? 0.0 : *std::max_element(band.begin(), band.end());
  if (!(peak > 0.0)) {
    throw Error("empty flare band");
  }
  SoftMask out(band.width(), band.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = band[i] / peak * radial[i] * strength;
  }
  return out;
}

RgbImage blend_flare(const RgbImage & gt, const SoftMask & alpha, const Rgb & purple)
{
  require_same_shape(gt, alpha, "blend_flare");
  RgbImage out(gt.width(), gt.height());
  auto mix = [](double base, double tint, double a) {
    return std::clamp(base * (1.0 - a) + tint * a, 0.0, 1.0);
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = alpha[i];
    out[i] = {mix(gt[i].r, purple.r, a), mix(gt[i].g, purple.g, a), mix(gt[i].b, purple.b, a)};
  }
  return out;
}

namespace
{

SynthParams apply_jitter(SynthParams p)
{
  if (p.jitter <= 0.0) {
    return p;
  }
  Rng rng(p.seed);
  const double lo = 1.0 - p.jitter;
  const double hi = 1.0 + p.jitter;
  p.strength = std::clamp(p.strength * rng.uniform(lo, hi), 0.0, 1.0);
  p.gamma *= rng.uniform(lo, hi);
  p.edge_width = std::max(1, static_cast<int>(std::lround(p.edge_width * rng.uniform(lo, hi))));
  return p;
}

}  // namespace

SynthResult synthesize(const RgbImage & gt, const SynthParams & params)
{
  params.validate();
  if (gt.width() < 3 || gt.height() < 3) {
    throw Error("synthesize needs an image of at least 3x3");
  }
  SynthParams applied = apply_jitter(params);
  applied.edge_width = effective_edge_width(applied.edge_width, gt.width(), gt.height());

  const GrayImage gray = grayscale(gt);
  const double highlight = percentile_threshold(gray, applied.highlight_pct);
  const BinaryMask bright = bright_mask(gray, highlight);
  if (std::none_of(bright.begin(), bright.end(), [](auto v) { return v != 0; })) {
    return NoFlare{NoFlare::Reason::kNoHighlights};
  }

  const BinaryMask edges = edge_mask(sobel_magnitude(gray), applied.grad_thresh);
  BinaryMask candidate = candidate_flare_mask(bright, edges);
  if (std::none_of(candidate.begin(), candidate.end(), [](auto v) { return v != 0; })) {
    return NoFlare{NoFlare::Reason::kNoCandidates};
  }

  const BinaryMask dilated = dilate_ellipse(candidate, applied.edge_width);
  const SoftMask band = gaussian_blur(dilated, 0.6 * applied.edge_width);
  const SoftMask radial = radial_falloff(gt.width(), gt.height(), applied.gamma);
  const SoftMask alpha = alpha_mask(band, radial, applied.strength);

  FlareSample sample;
  sample.input = blend_flare(gt, alpha, applied.purple);
  sample.gt = gt;
  sample.mask = std::move(candidate);
  sample.params = applied;
  return sample;
}

SceneSplit split_scenes(std::vector<std::string> scene_ids, std::uint64_t seed)
{
  std::sort(scene_ids.begin(), scene_ids.end());
  if (std::adjacent_find(scene_ids.begin(), scene_ids.end()) != scene_ids.end()) {
    throw Error("duplicate scene id: " + *std::adjacent_find(scene_ids.begin(), scene_ids.end()));
  }
  Rng rng(seed);
  rng.shuffle(scene_ids);

  const double n = static_cast<double>(scene_ids.size());
  const auto n_train = static_cast<std::size_t>(std::lround(0.8 * n));
  const auto n_test =
    std::min(static_cast<std::size_t>(std::lround(0.1 * n)), scene_ids.size() - n_train);

  SceneSplit split;
  auto it = scene_ids.begin();
  split.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  it += static_cast<std::ptrdiff_t>(n_train);
  split.test.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
  it += static_cast<std::ptrdiff_t>(n_test);
  split.val.assign(it, scene_ids.end());
  return split;
}

}  // namespace flarekit
