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

#ifndef FLAREKIT__LUT_HPP_
#define FLAREKIT__LUT_HPP_

#include <nlohmann/json.hpp>

#include <vector>

#include "flarekit/image.hpp"
#include "flarekit/weight_bundle.hpp"

namespace flarekit
{

inline constexpr int kDefaultLutSize = 33;
inline constexpr int kDefaultLutSets = 16;

enum class LutDomain
{
  kLinear,    ///< [0,1], control point k at k / (S - 1), output clamped
  kCircular,  ///< [0,1) on a circle, control point k at k / S, output wrapped
};

/// Interpolation footprint of one input value: the output is
/// values[lo] + t * (values[hi] - values[lo]), with the difference taken
/// along the shorter arc in the circular domain.
struct LutBracket
{
  int lo = 0;
  int hi = 1;
  double t = 0.0;
};

/// Piecewise-linear 1D curve defined by S >= 2 control points.
class Lut1D
{
public:
  Lut1D() = default;
  Lut1D(std::vector<double> values, LutDomain domain);

  const std::vector<double> & values() const { return values_; }
  std::vector<double> & values() { return values_; }
  LutDomain domain() const { return domain_; }
  int size() const { return static_cast<int>(values_.size()); }

  LutBracket bracket(double x) const;

  /// Interpolated value before clamping (linear) or wrapping (circular).
  double raw(double x) const;
  double apply(double x) const;

  /// The two halves of apply(): interpolation within a bracket, then the
  /// domain's clamp or wrap.
  double interpolate(const LutBracket & b) const;
  double finish(double raw_value) const;

private:
  std::vector<double> values_;
  LutDomain domain_ = LutDomain::kLinear;
};

/// One curve per HSV channel; the hue curve is circular.
struct LutSet
{
  Lut1D h;
  Lut1D s;
  Lut1D v;
};

/// N_L curve triples and their fusion weights (non-negative, summing to 1).
struct LutBank
{
  std::vector<LutSet> sets;
  std::vector<double> weights;

  int n_l() const { return static_cast<int>(sets.size()); }
  int s_lut() const { return sets.empty() ? 0 : sets.front().v.size(); }

  /// Throws Error when a structural or weight invariant is violated.
  void validate() const;

  static LutBank identity(int n_l, int s_lut);
};

/// values[k] = k / (S - 1) for linear, k / S for circular.
Lut1D identity_lut(int s_lut, LutDomain domain);
LutSet identity_lut_set(int s_lut);

/// Applies the curve to every pixel of a plane whose values lie in the
/// curve's domain (hue pre-divided by 360).
Plane<double> apply_lut(const Plane<double> & plane, const Lut1D & lut);

/// Weighted fusion of every set's output. S and V use the weighted
/// arithmetic mean; H uses the weighted circular mean (the input hue is kept
/// where the resultant vector vanishes).
HsvImage correct_hsv(const HsvImage & img, const LutBank & bank);

/// correct_hsv on an RGB image: RGB -> HSV -> curves -> RGB.
RgbImage correct_rgb(const RgbImage & img, const LutBank & bank);

/// Per-pixel hue fusion shared by correct_hsv and the fitter. Inputs and
/// output are fractions of a turn in [0,1).
double fuse_hue(const std::vector<double> & hues, const std::vector<double> & weights, double fallback);

/// High-frequency detail of the original: img minus its Gaussian blur
/// (sigma 1). Values may be negative.
RgbImage residual_features(const RgbImage & original);

/// 1x1 convolution over [fused, residual] (6 -> 3 channels, tensors
/// "fusion.weight" [3, 6] and "fusion.bias" [3]) plus the original image,
/// clamped to [0,1].
RgbImage residual_fuse(
  const RgbImage & fused, const RgbImage & residual, const RgbImage & original,
  const WeightBundle & weights);

/// {n_l, s_lut, weights[], sets[{h[], s[], v[]}]}
nlohmann::json lut_bank_to_json(const LutBank & bank);
LutBank lut_bank_from_json(const nlohmann::json & j);

}  // namespace flarekit

#endif  // FLAREKIT__LUT_HPP_
