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

#include "flarekit/color.hpp"

#include <algorithm>
#include <cmath>

namespace flarekit
{

Hsv rgb_to_hsv(const Rgb & p)
{
  const double mx = std::max({p.r, p.g, p.b});
  const double mn = std::min({p.r, p.g, p.b});
  const double delta = mx - mn;

  Hsv out;
  out.v = mx;
  if (delta <= 0.0) {
    return out;
  }
  out.s = mx > 0.0 ? delta / mx : 0.0;

  double h;
  if (mx == p.r) {
    h = 60.0 * (p.g - p.b) / delta;
  } else if (mx == p.g) {
    h = 60.0 * (p.b - p.r) / delta + 120.0;
  } else {
    h = 60.0 * (p.r - p.g) / delta + 240.0;
  }
  out.h = wrap_degrees(h);
  return out;
}

Rgb hsv_to_rgb(const Hsv & p)
{
  const double v = p.v;
  const double s = p.s;
  if (s <= 0.0) {
    return {v, v, v};
  }
  const double h6 = wrap_degrees(p.h) / 60.0;
  const int sector = std::min(static_cast<int>(std::floor(h6)), 5);
  const double f = h6 - sector;
  const double lo = v * (1.0 - s);
  const double falling = v * (1.0 - s * f);
  const double rising = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0:
      return {v, rising, lo};
    case 1:
      return {falling, v, lo};
    case 2:
      return {lo, v, rising};
    case 3:
      return {lo, falling, v};
    case 4:
      return {rising, lo, v};
    default:
      return {v, lo, falling};
  }
}

HsvImage rgb_to_hsv(const RgbImage & img)
{
  HsvImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Hsv p = rgb_to_hsv(img[i]);
    out.h[i] = p.h;
    out.s[i] = p.s;
    out.v[i] = p.v;
  }
  return out;
}

RgbImage hsv_to_rgb(const HsvImage & img)
{
  require_same_shape(img.h, img.s, "hsv_to_rgb");
  require_same_shape(img.h, img.v, "hsv_to_rgb");
  RgbImage out(img.width(), img.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = hsv_to_rgb(Hsv{img.h[i], img.s[i], img.v[i]});
  }
  return out;
}

double luma(const Rgb & p) { return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b; }

GrayImage grayscale(const RgbImage & img)
{
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = luma(img[i]);
  }
  return out;
}

double circular_hue_diff(double h1, double h2)
{
  const double d = std::fabs(h1 - h2);
  return std::min(d, 360.0 - d);
}

double wrap_degrees(double h)
{
  double w = std::fmod(h, 360.0);
  if (w < 0.0) {
    w += 360.0;
  }
  // fmod of a tiny negative value plus 360 can round up to exactly 360.
  return w >= 360.0 ? 0.0 : w;
}

namespace
{

// D65 reference white, taken as the row sums of the sRGB -> XYZ matrix so
// that RGB white lands exactly on a* = b* = 0.
constexpr double kM[3][3] = {
  {0.4124564, 0.3575761, 0.1804375},
  {0.2126729, 0.7151522, 0.0721750},
  {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXn = kM[0][0] + kM[0][1] + kM[0][2];
constexpr double kYn = kM[1][0] + kM[1][1] + kM[1][2];
constexpr double kZn = kM[2][0] + kM[2][1] + kM[2][2];

double srgb_to_linear(double c)
{
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t)
{
  constexpr double delta = 6.0 / 29.0;
  if (t > delta * delta * delta) {
    return std::cbrt(t);
  }
  return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

Lab rgb_to_lab(const Rgb & p)
{
  const double r = srgb_to_linear(p.r);
  const double g = srgb_to_linear(p.g);
  const double b = srgb_to_linear(p.b);
  const double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
  const double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
  const double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;
  const double fx = lab_f(x / kXn);
  const double fy = lab_f(y / kYn);
  const double fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RgbImage & img)
{
  LabImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = rgb_to_lab(img[i]);
  }
  return out;
}

}  // namespace flarekit
