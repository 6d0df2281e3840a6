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

#include "flarekit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "flarekit/color.hpp"
#include "flarekit/synthesis.hpp"

namespace flarekit
{

namespace
{

double pixel_se(const Rgb & a, const Rgb & b)
{
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return dr * dr + dg * dg + db * db;
}

nlohmann::json optional_json(const std::optional<double> & v)
{
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// Separable 11-tap Gaussian (sigma 1.5), valid region only.
Plane<double> window_mean(const Plane<double> & img, const std::vector<double> & kernel)
{
  const int r = static_cast<int>(kernel.size()) / 2;
  const int w = img.width() - 2 * r;
  const int h = img.height() - 2 * r;
  Plane<double> horizontal(w, img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(kernel.size()); ++k) {
        acc += kernel[static_cast<std::size_t>(k)] * img(x + k, y);
      }
      horizontal(x, y) = acc;
    }
  }
  Plane<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(kernel.size()); ++k) {
        acc += kernel[static_cast<std::size_t>(k)] * horizontal(x, y + k);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const MetricsReport & report)
{
  return {{"psnr", report.psnr},
          {"ssim", optional_json(report.ssim)},
          {"psnr_f", optional_json(report.psnr_f)},
          {"psnr_nf", optional_json(report.psnr_nf)},
          {"hae", report.hae},
          {"delta_e", report.delta_e}};
}

double psnr_from_sums(double sse, double count)
{
  if (!(sse > 0.0)) {
    return kPsnrCap;
  }
  return std::min(kPsnrCap, 10.0 * std::log10(count / sse));
}

double squared_error_sum(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "squared_error_sum");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sse += pixel_se(a[i], b[i]);
  }
  return sse;
}

double psnr(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "psnr");
  if (a.empty()) {
    throw UndefinedMetric("psnr of an empty image");
  }
  return psnr_from_sums(squared_error_sum(a, b), 3.0 * static_cast<double>(a.size()));
}

double ssim(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "ssim");
  constexpr int kWindow = 11;
  if (a.width() < kWindow || a.height() < kWindow) {
    throw Error("ssim needs images of at least 11x11");
  }
  std::vector<double> kernel(kWindow);
  double total = 0.0;
  for (int k = 0; k < kWindow; ++k) {
    const double d = k - kWindow / 2;
    kernel[static_cast<std::size_t>(k)] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
    total += kernel[static_cast<std::size_t>(k)];
  }
  for (double & w : kernel) {
    w /= total;
  }

  const GrayImage x = grayscale(a);
  const GrayImage y = grayscale(b);
  GrayImage xx(x.width(), x.height()), yy(x.width(), x.height()), xy(x.width(), x.height());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = window_mean(x, kernel);
  const auto mu_y = window_mean(y, kernel);
  const auto e_xx = window_mean(xx, kernel);
  const auto e_yy = window_mean(yy, kernel);
  const auto e_xy = window_mean(xy, kernel);

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  double acc = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    acc += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(mu_x.size());
}

double masked_squared_error(
  const RgbImage & out, const RgbImage & gt, const BinaryMask & mask, MaskRegion region)
{
  require_same_shape(out, gt, "masked_squared_error");
  require_same_shape(out, mask, "masked_squared_error");
  const std::uint8_t want = region == MaskRegion::kFlare ? 1 : 0;
  double sse = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if ((mask[i] != 0 ? 1 : 0) == want) {
      sse += pixel_se(out[i], gt[i]);
    }
  }
  return sse;
}

double psnr_masked(const RgbImage & out, const RgbImage & gt, const BinaryMask & mask, MaskRegion region)
{
  const double sse = masked_squared_error(out, gt, mask, region);
  const std::uint8_t want = region == MaskRegion::kFlare ? 1 : 0;
  std::size_t pixels = 0;
  for (const std::uint8_t m : mask) {
    pixels += (m != 0 ? 1 : 0) == want ? 1 : 0;
  }
  if (pixels == 0) {
    throw UndefinedMetric(region == MaskRegion::kFlare ? "empty flare region" : "empty non-flare region");
  }
  return psnr_from_sums(sse, 3.0 * static_cast<double>(pixels));
}

BinaryMask hae_flare_mask(const RgbImage & input)
{
  BinaryMask mask(input.width(), input.height());
  if (input.width() < 3 || input.height() < 3) {
    return mask;
  }
  const SoftMask gradient = sobel_magnitude(grayscale(input));
  const SynthParams defaults;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!(gradient[i] > defaults.grad_thresh)) {
      continue;
    }
    const Hsv p = rgb_to_hsv(input[i]);
    if (p.h >= kPurpleHueLow && p.h <= kPurpleHueHigh && p.s > kHaeSaturationGate) {
      mask[i] = 1;
    }
  }
  return mask;
}

double hae_masked(const RgbImage & out, const RgbImage & gt, const BinaryMask & mask)
{
  require_same_shape(out, gt, "hae");
  require_same_shape(out, mask, "hae");
  double weighted = 0.0;
  double weight = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask[i] == 0) {
      continue;
    }
    any = true;
    const Hsv o = rgb_to_hsv(out[i]);
    const Hsv g = rgb_to_hsv(gt[i]);
    weighted += circular_hue_diff(o.h, g.h) * g.s;
    weight += g.s;
  }
  return any ? weighted / (weight + kHaeEpsilon) : 0.0;
}

double hae(const RgbImage & out, const RgbImage & gt, const RgbImage & input)
{
  require_same_shape(out, input, "hae");
  return hae_masked(out, gt, hae_flare_mask(input));
}

double delta_e(const RgbImage & a, const RgbImage & b)
{
  require_same_shape(a, b, "delta_e");
  if (a.empty()) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Lab p = rgb_to_lab(a[i]);
    const Lab q = rgb_to_lab(b[i]);
    acc += std::sqrt((p.l - q.l) * (p.l - q.l) + (p.a - q.a) * (p.a - q.a) + (p.b - q.b) * (p.b - q.b));
  }
  return acc / static_cast<double>(a.size());
}

MetricsReport evaluate(
  const RgbImage & out, const RgbImage & gt, const RgbImage * input, const BinaryMask * mask)
{
  MetricsReport report;
  report.psnr = psnr(out, gt);
  if (out.width() >= 11 && out.height() >= 11) {
    report.ssim = ssim(out, gt);
  }
  if (mask != nullptr) {
    try {
      report.psnr_f = psnr_masked(out, gt, *mask, MaskRegion::kFlare);
    } catch (const UndefinedMetric &) {
    }
    try {
      report.psnr_nf = psnr_masked(out, gt, *mask, MaskRegion::kNonFlare);
    } catch (const UndefinedMetric &) {
    }
  }
  if (input != nullptr) {
    report.hae = hae(out, gt, *input);
  } else if (mask != nullptr) {
    report.hae = hae_masked(out, gt, *mask);
  }
  report.delta_e = delta_e(out, gt);
  return report;
}

}  // namespace flarekit
