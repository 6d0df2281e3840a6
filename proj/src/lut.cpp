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

#include "flarekit/lut.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flarekit/color.hpp"
#include "flarekit/synthesis.hpp"

namespace flarekit
{

namespace
{

double wrap_unit(double x)
{
  double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

// Signed difference b - a taken along the shorter arc of the unit circle.
double arc_delta(double a, double b)
{
  const double d = b - a;
  return d - std::round(d);
}

}  // namespace

Lut1D::Lut1D(std::vector<double> values, LutDomain domain)
: values_(std::move(values)), domain_(domain)
{
  if (values_.size() < 2) {
    throw Error("a 1D LUT needs at least 2 control points");
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw Error("LUT control points must be finite");
    }
  }
}

LutBracket Lut1D::bracket(double x) const
{
  const int n = size();
  LutBracket b;
  if (domain_ == LutDomain::kLinear) {
    const double pos = std::clamp(x, 0.0, 1.0) * (n - 1);
    b.lo = std::min(static_cast<int>(std::floor(pos)), n - 2);
    b.hi = b.lo + 1;
    b.t = pos - b.lo;
  } else {
    const double pos = wrap_unit(x) * n;
    b.lo = std::min(static_cast<int>(std::floor(pos)), n - 1);
    b.hi = (b.lo + 1) % n;
    b.t = pos - b.lo;
  }
  return b;
}

double Lut1D::raw(double x) const { return interpolate(bracket(x)); }

double Lut1D::apply(double x) const { return finish(raw(x)); }

double Lut1D::interpolate(const LutBracket & b) const
{
  const double a = values_[static_cast<std::size_t>(b.lo)];
  const double c = values_[static_cast<std::size_t>(b.hi)];
  if (domain_ == LutDomain::kLinear) {
    return a + b.t * (c - a);
  }
  return a + b.t * arc_delta(a, c);
}

double Lut1D::finish(double raw_value) const
{
  return domain_ == LutDomain::kLinear ? std::clamp(raw_value, 0.0, 1.0) : wrap_unit(raw_value);
}

void LutBank::validate() const
{
  if (sets.empty()) {
    throw Error("a LUT bank needs at least one set");
  }
  if (weights.size() != sets.size()) {
    throw Error("LUT bank weight count does not match set count");
  }
  const int s = s_lut();
  for (const LutSet & set : sets) {
    if (set.h.domain() != LutDomain::kCircular || set.s.domain() != LutDomain::kLinear ||
        set.v.domain() != LutDomain::kLinear)
    {
      throw Error("LUT set domains must be (circular, linear, linear)");
    }
    if (set.h.size() != s || set.s.size() != s || set.v.size() != s || s < 2) {
      throw Error("all curves of a LUT bank must share one size >= 2");
    }
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("LUT bank weights must be non-negative");
    }
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-6) {
    throw Error("LUT bank weights must sum to 1");
  }
}

LutBank LutBank::identity(int n_l, int s_lut)
{
  if (n_l < 1) {
    throw Error("n_l must be >= 1");
  }
  LutBank bank;
  bank.sets.assign(static_cast<std::size_t>(n_l), identity_lut_set(s_lut));
  bank.weights.assign(static_cast<std::size_t>(n_l), 1.0 / n_l);
  return bank;
}

Lut1D identity_lut(int s_lut, LutDomain domain)
{
  if (s_lut < 2) {
    throw Error("a 1D LUT needs at least 2 control points");
  }
  std::vector<double> values(static_cast<std::size_t>(s_lut));
  const double denom = domain == LutDomain::kLinear ? s_lut - 1 : s_lut;
  for (int k = 0; k < s_lut; ++k) {
    values[static_cast<std::size_t>(k)] = k / denom;
  }
  return Lut1D(std::move(values), domain);
}

LutSet identity_lut_set(int s_lut)
{
  return {identity_lut(s_lut, LutDomain::kCircular), identity_lut(s_lut, LutDomain::kLinear),
          identity_lut(s_lut, LutDomain::kLinear)};
}

Plane<double> apply_lut(const Plane<double> & plane, const Lut1D & lut)
{
  Plane<double> out(plane.width(), plane.height());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    out[i] = lut.apply(plane[i]);
  }
  return out;
}

double fuse_hue(const std::vector<double> & hues, const std::vector<double> & weights, double fallback)
{
  constexpr double kTurn = 2.0 * std::numbers::pi;
  double x = 0.0;
  double y = 0.0;
  for (std::size_t i = 0; i < hues.size(); ++i) {
    x += weights[i] * std::cos(kTurn * hues[i]);
    y += weights[i] * std::sin(kTurn * hues[i]);
  }
  if (x * x + y * y < 1e-24) {
    return fallback;
  }
  return wrap_unit(std::atan2(y, x) / kTurn);
}

HsvImage correct_hsv(const HsvImage & img, const LutBank & bank)
{
  bank.validate();
  HsvImage out(img.width(), img.height());
  const std::size_t n_sets = bank.sets.size();
  std::vector<double> hues(n_sets);
  for (std::size_t p = 0; p < img.h.size(); ++p) {
    const double h_in = img.h[p] / 360.0;
    double s = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < n_sets; ++i) {
      const LutSet & set = bank.sets[i];
      hues[i] = set.h.apply(h_in);
      s += bank.weights[i] * set.s.apply(img.s[p]);
      v += bank.weights[i] * set.v.apply(img.v[p]);
    }
    const double h = n_sets == 1 ? hues[0] : fuse_hue(hues, bank.weights, wrap_unit(h_in));
    out.h[p] = std::min(h * 360.0, std::nextafter(360.0, 0.0));
    out.s[p] = std::clamp(s, 0.0, 1.0);
    out.v[p] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

RgbImage correct_rgb(const RgbImage & img, const LutBank & bank)
{
  return hsv_to_rgb(correct_hsv(rgb_to_hsv(img), bank));
}

RgbImage residual_features(const RgbImage & original)
{
  Plane<double> r(original.width(), original.height());
  Plane<double> g(original.width(), original.height());
  Plane<double> b(original.width(), original.height());
  for (std::size_t i = 0; i < original.size(); ++i) {
    r[i] = original[i].r;
    g[i] = original[i].g;
    b[i] = original[i].b;
  }
  const SoftMask rb = gaussian_blur(r, 1.0);
  const SoftMask gb = gaussian_blur(g, 1.0);
  const SoftMask bb = gaussian_blur(b, 1.0);
  RgbImage out(original.width(), original.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {r[i] - rb[i], g[i] - gb[i], b[i] - bb[i]};
  }
  return out;
}

RgbImage residual_fuse(
  const RgbImage & fused, const RgbImage & residual, const RgbImage & original,
  const WeightBundle & weights)
{
  require_same_shape(fused, original, "residual_fuse");
  require_same_shape(residual, original, "residual_fuse");
  const Tensor & w = weights.require("fusion.weight", {3, 6});
  const Tensor & bias = weights.require("fusion.bias", {3});

  RgbImage out(original.width(), original.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double in[6] = {fused[i].r,    fused[i].g,    fused[i].b,
                          residual[i].r, residual[i].g, residual[i].b};
    const double base[3] = {original[i].r, original[i].g, original[i].b};
    double res[3];
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = bias.data[c];
      for (std::size_t j = 0; j < 6; ++j) {
        acc += static_cast<double>(w.data[c * 6 + j]) * in[j];
      }
      res[c] = std::clamp(acc + base[c], 0.0, 1.0);
    }
    out[i] = {res[0], res[1], res[2]};
  }
  return out;
}

nlohmann::json lut_bank_to_json(const LutBank & bank)
{
  nlohmann::json sets = nlohmann::json::array();
  for (const LutSet & set : bank.sets) {
    sets.push_back({{"h", set.h.values()}, {"s", set.s.values()}, {"v", set.v.values()}});
  }
  return {
    {"n_l", bank.n_l()}, {"s_lut", bank.s_lut()}, {"weights", bank.weights}, {"sets", sets}};
}

LutBank lut_bank_from_json(const nlohmann::json & j)
{
  LutBank bank;
  try {
    const int n_l = j.at("n_l").get<int>();
    const int s_lut = j.at("s_lut").get<int>();
    bank.weights = j.at("weights").get<std::vector<double>>();
    for (const auto & set : j.at("sets")) {
      bank.sets.push_back(
        {Lut1D(set.at("h").get<std::vector<double>>(), LutDomain::kCircular),
         Lut1D(set.at("s").get<std::vector<double>>(), LutDomain::kLinear),
         Lut1D(set.at("v").get<std::vector<double>>(), LutDomain::kLinear)});
    }
    if (bank.n_l() != n_l || bank.s_lut() != s_lut) {
      throw Error("LUT bank JSON header disagrees with its contents");
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed LUT bank JSON: ") + e.what());
  }
  bank.validate();
  return bank;
}

}  // namespace flarekit
