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

#ifndef FLAREKIT__COLOR_HPP_
#define FLAREKIT__COLOR_HPP_

#include "flarekit/image.hpp"

namespace flarekit
{

struct Hsv
{
  double h = 0.0;  // degrees, [0,360)
  double s = 0.0;
  double v = 0.0;
};

// Hexcone HSV. Achromatic pixels (max == min) map to H = 0, S = 0.
Hsv rgb_to_hsv(const Rgb & p);
Rgb hsv_to_rgb(const Hsv & p);

HsvImage rgb_to_hsv(const RgbImage & img);
RgbImage hsv_to_rgb(const HsvImage & img);

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b.
double luma(const Rgb & p);
GrayImage grayscale(const RgbImage & img);

/// Shortest angular distance on the hue circle, in [0,180].
double circular_hue_diff(double h1, double h2);

/// Wraps any finite angle into [0,360).
double wrap_degrees(double h);

/// sRGB (D65) -> linear -> XYZ -> CIELAB.
Lab rgb_to_lab(const Rgb & p);
LabImage rgb_to_lab(const RgbImage & img);

}  // namespace flarekit

#endif  // FLAREKIT__COLOR_HPP_
