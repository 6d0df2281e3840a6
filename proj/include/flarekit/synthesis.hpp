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

#ifndef FLAREKIT__SYNTHESIS_HPP_
#define FLAREKIT__SYNTHESIS_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flarekit/image.hpp"

namespace flarekit
{

/// Parameters of the purple-flare degradation model.
struct SynthParams
{
  double highlight_pct = 99.0;  ///< percentile of the luma for the highlight threshold, (0,100]
  double grad_thresh = 25.0;    ///< Sobel magnitude threshold on the 0-255 scale
  int edge_width = 80;          ///< dilation element size in pixels
  double strength = 0.7;        ///< peak blend alpha
  double gamma = 2.2;           ///< radial falloff exponent
  Rgb purple{1.0, 100.0 / 255.0, 1.0};
  std::uint64_t seed = 0;
  /// Relative jitter applied to strength, gamma and edge width; 0 disables.
  double jitter = 0.0;

  /// Throws Error when a field violates its documented range.
  void validate() const;

  bool operator==(const SynthParams &) const = default;
};

/// The dilation element is capped at a fraction of the short image side so
/// the 80 px default does not swallow small frames:
/// min(edge_width, max(1, min(width, height) / 8)).
int effective_edge_width(int edge_width, int width, int height);

struct FlareSample
{
  RgbImage input;   ///< degraded image
  RgbImage gt;      ///< clean image
  BinaryMask mask;  ///< candidate flare mask (bright AND edge), not the blurred band
  SynthParams params;  ///< parameters actually applied (after jitter and clamping)
  std::string scene_id;
  std::string frame_id;
};

struct NoFlare
{
  enum class Reason { kNoHighlights, kNoCandidates };
  Reason reason;
};

using SynthResult = std::variant<FlareSample, NoFlare>;

/// Nearest-rank percentile: the value at 1-based index ceil(pct/100 * N) of
/// the sorted pixels.
double percentile_threshold(const GrayImage & img, double pct);

/// Strict comparison img > threshold.
BinaryMask bright_mask(const GrayImage & img, double threshold);

/// 3x3 Sobel magnitude of img * 255 with edge replication.
SoftMask sobel_magnitude(const GrayImage & img);

/// Strict comparison G > threshold (0-255 scale).
BinaryMask edge_mask(const SoftMask & gradient, double threshold);

BinaryMask candidate_flare_mask(const BinaryMask & bright, const BinaryMask & edge);

/// size x size filled ellipse: cell (i, j) belongs iff its center lies in
/// (or on) the inscribed ellipse. Anchor is (size / 2, size / 2).
BinaryMask ellipse_element(int size);

/// Binary dilation: dst(x,y) = OR over element cells (i,j) of
/// src(x + i - anchor, y + j - anchor). Out-of-image source pixels are 0.
BinaryMask dilate_ellipse(const BinaryMask & mask, int size);

/// Separable Gaussian, radius ceil(3 sigma), normalized, edge-replicated.
SoftMask gaussian_blur(const SoftMask & mask, double sigma);
SoftMask gaussian_blur(const BinaryMask & mask, double sigma);

/// (dist / dist_max)^gamma with pixel (x, y) at coordinate (x, y), the
/// center at ((w-1)/2, (h-1)/2) and dist_max the center-to-corner distance.
SoftMask radial_falloff(int width, int height, double gamma);

/// band / max(band) * radial * strength; throws Error("empty flare band")
/// when the band is all zero.
SoftMask alpha_mask(const SoftMask & band, const SoftMask & radial, double strength);

/// gt * (1 - alpha) + purple * alpha, clamped to [0,1].
RgbImage blend_flare(const RgbImage & gt, const SoftMask & alpha, const Rgb & purple);

/// Full degradation pipeline. Returns NoFlare when no pixel exceeds the
/// highlight threshold or when no highlight pixel is also an edge.
SynthResult synthesize(const RgbImage & gt, const SynthParams & params);

struct SceneSplit
{
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Scene-level 80/10/10 split: ids are sorted, shuffled by seed, then
/// round(0.8 N) go to train, round(0.1 N) to test and the rest to val.
/// Duplicate ids throw.
SceneSplit split_scenes(std::vector<std::string> scene_ids, std::uint64_t seed);

}  // namespace flarekit

#endif  // FLAREKIT__SYNTHESIS_HPP_
