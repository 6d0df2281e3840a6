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

#ifndef FLAREKIT__METRICS_HPP_
#define FLAREKIT__METRICS_HPP_

#include <nlohmann/json.hpp>

#include <optional>

#include "flarekit/image.hpp"

namespace flarekit
{

/// PSNR reported for a zero (or vanishing) error.
inline constexpr double kPsnrCap = 100.0;

/// Purple band used to locate flare pixels, degrees inclusive.
inline constexpr double kPurpleHueLow = 260.0;
inline constexpr double kPurpleHueHigh = 340.0;
inline constexpr double kHaeSaturationGate = 0.2;
inline constexpr double kHaeEpsilon = 1e-8;

struct MetricsReport
{
  double psnr = 0.0;
  std::optional<double> ssim;     ///< absent for images smaller than 11x11
  std::optional<double> psnr_f;   ///< absent without a mask or with no flare pixels
  std::optional<double> psnr_nf;  ///< absent without a mask or with no clean pixels
  double hae = 0.0;
  double delta_e = 0.0;
};

/// Optional fields serialize as null.
nlohmann::json to_json(const MetricsReport & report);

/// 10 log10(count / sse) on the [0,1] scale, capped at kPsnrCap.
double psnr_from_sums(double sse, double count);

/// Sum of squared channel differences.
double squared_error_sum(const RgbImage & a, const RgbImage & b);

double psnr(const RgbImage & a, const RgbImage & b);

/// Single-scale SSIM on BT.601 luma: 11x11 Gaussian window (sigma 1.5),
/// valid region only, K1 = 0.01, K2 = 0.03, dynamic range 1.
double ssim(const RgbImage & a, const RgbImage & b);

enum class MaskRegion
{
  kFlare,     ///< pixels where the mask is 1
  kNonFlare,  ///< pixels where the mask is 0
};

/// Squared error summed over the region's pixels and all three channels.
double masked_squared_error(
  const RgbImage & out, const RgbImage & gt, const BinaryMask & mask, MaskRegion region);

/// PSNR-F / PSNR-NF: 10 log10(sum(M) / sum(SE * M)) with the mask broadcast
/// over channels. Throws UndefinedMetric when the region is empty.
double psnr_masked(const RgbImage & out, const RgbImage & gt, const BinaryMask & mask, MaskRegion region);

/// Flare pixels of a degraded input: Sobel edge (> 25 on the 0-255 scale),
/// hue within [260, 340] degrees and saturation above 0.2.
BinaryMask hae_flare_mask(const RgbImage & input);

/// Saturation-weighted circular hue error inside mask; 0 for an empty mask.
double hae_masked(const RgbImage & out, const RgbImage & gt, const BinaryMask & mask);

/// hae_masked over hae_flare_mask(input).
double hae(const RgbImage & out, const RgbImage & gt, const RgbImage & input);

/// Mean CIE76 distance in CIELAB.
double delta_e(const RgbImage & a, const RgbImage & b);

/// All metrics for one prediction. HAE uses the flare region of `input`
/// when given, otherwise the ground-truth mask, otherwise 0.
MetricsReport evaluate(
  const RgbImage & out, const RgbImage & gt, const RgbImage * input, const BinaryMask * mask);

}  // namespace flarekit

#endif  // FLAREKIT__METRICS_HPP_
