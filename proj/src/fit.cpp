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

#include "flarekit/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flarekit/color.hpp"

namespace flarekit
{

namespace
{

constexpr double kTurn = 2.0 * std::numbers::pi;

// Slope of |x|. Differences at round-off level (an HSV round trip of an
// untouched pixel) count as exact matches and take the zero subgradient.
double sign(double x)
{
  constexpr double kExact = 1e-12;
  return x > kExact ? 1.0 : (x < -kExact ? -1.0 : 0.0);
}

bool inside_unit(double x) { return x >= 0.0 && x <= 1.0; }

double wrap_unit(double x)
{
  const double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

// hsv_to_rgb together with its Jacobian; rows are r, g, b and columns are
// d/dH (degrees), d/dS, d/dV. Mirrors the sector logic of hsv_to_rgb.
struct RgbJacobian
{
  Rgb value;
  std::array<std::array<double, 3>, 3> d{};
};

RgbJacobian hsv_to_rgb_jacobian(double h, double s, double v)
{
  RgbJacobian j;
  j.value = hsv_to_rgb(Hsv{h, s, v});
  const double h6 = wrap_degrees(h) / 60.0;
  const int sector = std::min(static_cast<int>(std::floor(h6)), 5);
  const double f = h6 - sector;

  // Hue has no effect on a gray pixel; the slopes in s and v stay the
  // one-sided limits of the sector formulas.
  const double hue_scale = s <= 0.0 ? 0.0 : 1.0;
  const std::array<double, 3> top{0.0, 0.0, 1.0};
  const std::array<double, 3> lo{0.0, -v, 1.0 - s};
  const std::array<double, 3> falling{-hue_scale * v * s / 60.0, -v * f, 1.0 - s * f};
  const std::array<double, 3> rising{hue_scale * v * s / 60.0, -v * (1.0 - f), 1.0 - s * (1.0 - f)};
  const std::array<double, 3> * rows[6][3] = {
    {&top, &rising, &lo}, {&falling, &top, &lo}, {&lo, &top, &rising},
    {&lo, &falling, &top}, {&rising, &lo, &top}, {&top, &lo, &falling}};
  for (std::size_t c = 0; c < 3; ++c) {
    j.d[c] = *rows[sector][c];
  }
  return j;
}

// Everything the forward pass of one pixel produces that the backward pass
// needs.
struct PixelState
{
  // All sets share one size, so one bracket per channel serves every set.
  LutBracket bh, bs, bv;
  std::vector<double> hue_raw, s_raw, v_raw;
  std::vector<double> hues, s_vals, v_vals;
  double s_pre = 0.0;
  double v_pre = 0.0;
  double h = 0.0;  // fused hue, fraction of a turn
  double x = 0.0;  // resultant of the circular mean
  double y = 0.0;
  bool hue_fallback = false;
  Hsv out;
};

class Evaluator
{
public:
  Evaluator(const HsvImage & input, const RgbImage & gt, const LossWeights & w)
  : input_(input), gt_(gt), weights_(w), penalty_(penalty_mask(gt))
  {
    require_same_shape(input.h, gt, "lut loss");
    require_same_shape(input.s, gt, "lut loss");
    require_same_shape(input.v, gt, "lut loss");
    w.validate();
  }

  void forward_pixel(const LutBank & bank, std::size_t p, PixelState & st) const
  {
    const std::size_t n = bank.sets.size();
    st.hue_raw.resize(n);
    st.s_raw.resize(n);
    st.v_raw.resize(n);
    st.hues.resize(n);
    st.s_vals.resize(n);
    st.v_vals.resize(n);

    const double h_in = input_.h[p] / 360.0;
    const LutSet & first = bank.sets.front();
    st.bh = first.h.bracket(h_in);
    st.bs = first.s.bracket(input_.s[p]);
    st.bv = first.v.bracket(input_.v[p]);

    double s = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const LutSet & set = bank.sets[i];
      st.hue_raw[i] = set.h.interpolate(st.bh);
      st.s_raw[i] = set.s.interpolate(st.bs);
      st.v_raw[i] = set.v.interpolate(st.bv);
      st.hues[i] = set.h.finish(st.hue_raw[i]);
      st.s_vals[i] = set.s.finish(st.s_raw[i]);
      st.v_vals[i] = set.v.finish(st.v_raw[i]);
      s += bank.weights[i] * st.s_vals[i];
      v += bank.weights[i] * st.v_vals[i];
    }
    st.s_pre = s;
    st.v_pre = v;
    st.hue_fallback = false;
    if (n == 1) {
      st.h = st.hues[0];
    } else {
      st.h = fuse_hue(st.hues, bank.weights, wrap_unit(h_in));
      st.x = 0.0;
      st.y = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        st.x += bank.weights[i] * std::cos(kTurn * st.hues[i]);
        st.y += bank.weights[i] * std::sin(kTurn * st.hues[i]);
      }
      st.hue_fallback = st.x * st.x + st.y * st.y < 1e-24;
    }
    st.out.h = std::min(st.h * 360.0, std::nextafter(360.0, 0.0));
    st.out.s = std::clamp(s, 0.0, 1.0);
    st.out.v = std::clamp(v, 0.0, 1.0);
  }

  RgbImage render(const LutBank & bank) const
  {
    RgbImage out(gt_.width(), gt_.height());
    PixelState st;
    for (std::size_t p = 0; p < out.size(); ++p) {
      forward_pixel(bank, p, st);
      out[p] = hsv_to_rgb(st.out);
    }
    return out;
  }

  double loss(const LutBank & bank) const
  {
    return image_loss(render(bank), gt_, penalty_, weights_).total;
  }

  /// When `kink` is given it receives, per parameter, the rate at which
  /// moving that parameter (either way) raises the L1 terms of pixels that
  /// currently match gt exactly. Those pixels add nothing to the returned
  /// subgradient.
  LutGradient gradient(const LutBank & bank, LutGradient * kink = nullptr) const
  {
    const RgbImage out = render(bank);
    const OutputGradient d_out = output_gradient(out);

    LutGradient g = zero_gradient(bank);
    if (kink != nullptr) {
      *kink = zero_gradient(bank);
    }

    PixelState st;
    for (std::size_t p = 0; p < out.size(); ++p) {
      const auto & go = d_out.slope[p];
      const auto & ex = d_out.exact[p];
      const bool any_slope = go[0] != 0.0 || go[1] != 0.0 || go[2] != 0.0;
      const bool any_exact = kink != nullptr && (ex[0] != 0.0 || ex[1] != 0.0 || ex[2] != 0.0);
      if (!any_slope && !any_exact) {
        continue;
      }
      forward_pixel(bank, p, st);
      const RgbJacobian jac = hsv_to_rgb_jacobian(st.out.h, st.out.s, st.out.v);
      if (any_slope) {
        std::array<double, 3> d_hsv{0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < 3; ++c) {
          for (std::size_t k = 0; k < 3; ++k) {
            d_hsv[k] += go[c] * jac.d[c][k];
          }
        }
        backprop(bank, st, d_hsv, false, g);
      }
      if (any_exact) {
        for (std::size_t c = 0; c < 3; ++c) {
          if (ex[c] != 0.0) {
            const std::array<double, 3> d_hsv{ex[c] * jac.d[c][0], ex[c] * jac.d[c][1], ex[c] * jac.d[c][2]};
            backprop(bank, st, d_hsv, true, *kink);
          }
        }
      }
    }
    return g;
  }

private:
  struct OutputGradient
  {
    std::vector<std::array<double, 3>> slope;  // dLoss / dOutput
    std::vector<std::array<double, 3>> exact;  // |slope| the L1 kink would have, at exact matches
  };

  static LutGradient zero_gradient(const LutBank & bank)
  {
    const std::size_t s_lut = static_cast<std::size_t>(bank.s_lut());
    LutGradient g;
    g.sets.assign(
      bank.sets.size(),
      {std::vector<double>(s_lut, 0.0), std::vector<double>(s_lut, 0.0), std::vector<double>(s_lut, 0.0)});
    g.weights.assign(bank.sets.size(), 0.0);
    return g;
  }

  static void scatter(std::vector<double> & dst, const LutBracket & b, double d, bool absolute)
  {
    const double lo = (1.0 - b.t) * d;
    const double hi = b.t * d;
    dst[static_cast<std::size_t>(b.lo)] += absolute ? std::fabs(lo) : lo;
    dst[static_cast<std::size_t>(b.hi)] += absolute ? std::fabs(hi) : hi;
  }

  // Chain rule from the fused HSV output (hue in degrees) of one pixel back
  // to the bank parameters.
  static void backprop(
    const LutBank & bank, const PixelState & st, const std::array<double, 3> & d_hsv, bool absolute,
    LutGradient & g)
  {
    const std::size_t n = bank.sets.size();
    const double d_h = d_hsv[0] * 360.0;
    const double d_s = inside_unit(st.s_pre) ? d_hsv[1] : 0.0;
    const double d_v = inside_unit(st.v_pre) ? d_hsv[2] : 0.0;
    const double r2 = st.x * st.x + st.y * st.y;
    auto add = [absolute](double & dst, double d) { dst += absolute ? std::fabs(d) : d; };

    for (std::size_t i = 0; i < n; ++i) {
      const double wi = bank.weights[i];
      auto & gs = g.sets[i];

      double d_hue_i = 0.0;
      if (n == 1) {
        d_hue_i = d_h;
      } else if (!st.hue_fallback) {
        const double phi = kTurn * st.hues[i];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        d_hue_i = d_h * wi * (st.x * c + st.y * s) / r2;
        add(g.weights[i], d_h * (st.x * s - st.y * c) / (r2 * kTurn));
      }
      scatter(gs.h, st.bh, d_hue_i, absolute);

      const double d_si = inside_unit(st.s_raw[i]) ? d_s * wi : 0.0;
      const double d_vi = inside_unit(st.v_raw[i]) ? d_v * wi : 0.0;
      scatter(gs.s, st.bs, d_si, absolute);
      scatter(gs.v, st.bv, d_vi, absolute);
      add(g.weights[i], d_s * st.s_vals[i] + d_v * st.v_vals[i]);
    }
  }

  OutputGradient output_gradient(const RgbImage & out) const
  {
    const std::size_t count = out.size();
    const double norm = 1.0 / (3.0 * static_cast<double>(count));
    OutputGradient og;
    og.slope.resize(count);
    og.exact.resize(count);
    auto & d = og.slope;
    for (std::size_t p = 0; p < count; ++p) {
      const double scale = (weights_.l1 + weights_.flare * penalty_[p]) * norm;
      const double e[3] = {out[p].r - gt_[p].r, out[p].g - gt_[p].g, out[p].b - gt_[p].b};
      for (std::size_t c = 0; c < 3; ++c) {
        d[p][c] = scale * sign(e[c]);
        og.exact[p][c] = sign(e[c]) == 0.0 ? scale : 0.0;
      }
    }
    if (weights_.perceptual > 0.0) {
      const auto po = luma_pyramid(out);
      const auto pg = luma_pyramid(gt_);
      const double level_scale = weights_.perceptual / static_cast<double>(po.size());
      // Walk from the coarsest level down, folding each level's gradient
      // into the next finer one.
      GrayImage carry;
      for (std::size_t l = po.size(); l-- > 0;) {
        GrayImage level(po[l].width(), po[l].height());
        const double k = level_scale / static_cast<double>(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
          level[i] = k * sign(po[l][i] - pg[l][i]);
        }
        if (!carry.empty()) {
          const GrayImage up = pyr_down_adjoint(carry, level.width(), level.height());
          for (std::size_t i = 0; i < level.size(); ++i) {
            level[i] += up[i];
          }
        }
        carry = std::move(level);
      }
      for (std::size_t p = 0; p < count; ++p) {
        d[p][0] += 0.299 * carry[p];
        d[p][1] += 0.587 * carry[p];
        d[p][2] += 0.114 * carry[p];
      }
    }
    return og;
  }

  const HsvImage & input_;
  const RgbImage & gt_;
  LossWeights weights_;
  SoftMask penalty_;
};

void check_bank_shape(const LutBank & bank)
{
  if (bank.sets.empty() || bank.weights.size() != bank.sets.size()) {
    throw Error("LUT bank needs matching, non-empty sets and weights");
  }
}

LutBank project(LutBank bank)
{
  double total = 0.0;
  for (double & w : bank.weights) {
    w = std::max(0.0, w);
    total += w;
  }
  for (double & w : bank.weights) {
    w = total > 0.0 ? w / total : 1.0 / static_cast<double>(bank.weights.size());
  }
  for (LutSet & set : bank.sets) {
    for (double & v : set.h.values()) {
      v = wrap_unit(v);
    }
  }
  return bank;
}

// Fraction of the image each parameter touches: the summed interpolation
// weights of the pixels bracketing each control point (1 for weights).
std::vector<double> coverage(const HsvImage & input, const LutBank & bank)
{
  const LutSet & first = bank.sets.front();
  const std::size_t s_lut = static_cast<std::size_t>(bank.s_lut());
  std::vector<double> h(s_lut, 0.0), s(s_lut, 0.0), v(s_lut, 0.0);
  auto add = [](std::vector<double> & dst, const LutBracket & b) {
    dst[static_cast<std::size_t>(b.lo)] += 1.0 - b.t;
    dst[static_cast<std::size_t>(b.hi)] += b.t;
  };
  for (std::size_t p = 0; p < input.h.size(); ++p) {
    add(h, first.h.bracket(input.h[p] / 360.0));
    add(s, first.s.bracket(input.s[p]));
    add(v, first.v.bracket(input.v[p]));
  }
  const double n = static_cast<double>(input.h.size());
  std::vector<double> out;
  for (std::size_t i = 0; i < bank.sets.size(); ++i) {
    for (const auto * curve : {&h, &s, &v}) {
      for (const double c : *curve) {
        out.push_back(c / n);
      }
    }
  }
  out.insert(out.end(), bank.weights.size(), 1.0);
  return out;
}

// Subgradient with each coordinate shrunk toward zero by its kink rate, so
// a parameter only moves when its pull outweighs the exactly matching
// pixels it would disturb, then divided by the parameter's coverage so
// rarely used control points move as fast as busy ones. Weight components
// are centered so the move stays on the simplex (they vanish for a single
// set).
std::vector<double> descent_direction(
  const Evaluator & eval, const LutBank & bank, const std::vector<double> & cover)
{
  LutGradient kink;
  std::vector<double> g = eval.gradient(bank, &kink).flatten();
  const std::vector<double> k = kink.flatten();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double mag = std::max(0.0, std::fabs(g[j]) - k[j]);
    g[j] = cover[j] > 0.0 ? std::copysign(mag, g[j]) / cover[j] : 0.0;
  }
  const std::size_t n = bank.weights.size();
  const std::size_t first = g.size() - n;
  double mean = 0.0;
  for (std::size_t j = first; j < g.size(); ++j) {
    mean += g[j];
  }
  mean /= static_cast<double>(n);
  for (std::size_t j = first; j < g.size(); ++j) {
    g[j] -= mean;
  }
  return g;
}

void check_pair(const RgbImage & input, const RgbImage & gt)
{
  require_same_shape(input, gt, "fit_luts");
  if (input.empty()) {
    throw Error("fit_luts needs a non-empty image");
  }
}

}  // namespace

void FitConfig::validate() const
{
  if (n_l < 1) {
    throw Error("fit config: n_l must be >= 1");
  }
  if (s_lut < 2) {
    throw Error("fit config: s_lut must be >= 2");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error("fit config: step must be > 0");
  }
  if (max_iters < 1) {
    throw Error("fit config: max_iters must be >= 1");
  }
  if (!(tol >= 0.0)) {
    throw Error("fit config: tol must be >= 0");
  }
  weights.validate();
}

FitConfig fit_config_from_json(const nlohmann::json & j)
{
  FitConfig cfg;
  try {
    cfg.n_l = j.value("n_l", cfg.n_l);
    cfg.s_lut = j.value("s_lut", cfg.s_lut);
    cfg.step = j.value("step", cfg.step);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("weights")) {
      const auto & w = j.at("weights");
      cfg.weights.l1 = w.value("l1", cfg.weights.l1);
      cfg.weights.perceptual = w.value("perceptual", cfg.weights.perceptual);
      cfg.weights.flare = w.value("flare", cfg.weights.flare);
      cfg.weights.commitment = w.value("commitment", cfg.weights.commitment);
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed fit config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const FitConfig & cfg)
{
  return {{"n_l", cfg.n_l},
          {"s_lut", cfg.s_lut},
          {"step", cfg.step},
          {"max_iters", cfg.max_iters},
          {"tol", cfg.tol},
          {"seed", cfg.seed},
          {"weights",
           {{"l1", cfg.weights.l1},
            {"perceptual", cfg.weights.perceptual},
            {"flare", cfg.weights.flare},
            {"commitment", cfg.weights.commitment}}}};
}

std::vector<double> LutGradient::flatten() const
{
  std::vector<double> out;
  for (const Set & set : sets) {
    out.insert(out.end(), set.h.begin(), set.h.end());
    out.insert(out.end(), set.s.begin(), set.s.end());
    out.insert(out.end(), set.v.begin(), set.v.end());
  }
  out.insert(out.end(), weights.begin(), weights.end());
  return out;
}

std::vector<double> flatten_params(const LutBank & bank)
{
  std::vector<double> out;
  for (const LutSet & set : bank.sets) {
    out.insert(out.end(), set.h.values().begin(), set.h.values().end());
    out.insert(out.end(), set.s.values().begin(), set.s.values().end());
    out.insert(out.end(), set.v.values().begin(), set.v.values().end());
  }
  out.insert(out.end(), bank.weights.begin(), bank.weights.end());
  return out;
}

LutBank unflatten_params(const LutBank & shape, const std::vector<double> & params)
{
  LutBank bank = shape;
  std::size_t k = 0;
  auto take = [&](std::vector<double> & dst) {
    for (double & v : dst) {
      if (k >= params.size()) {
        throw ShapeError("parameter vector is shorter than the bank");
      }
      v = params[k++];
    }
  };
  for (LutSet & set : bank.sets) {
    take(set.h.values());
    take(set.s.values());
    take(set.v.values());
  }
  take(bank.weights);
  if (k != params.size()) {
    throw ShapeError("parameter vector is longer than the bank");
  }
  return bank;
}

double lut_loss(const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w)
{
  check_bank_shape(bank);
  return Evaluator(input, gt, w).loss(bank);
}

LutGradient lut_loss_gradient(
  const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w)
{
  check_bank_shape(bank);
  return Evaluator(input, gt, w).gradient(bank);
}

LutGradient finite_diff_gradient(
  const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w, double step)
{
  check_bank_shape(bank);
  if (!(step > 0.0)) {
    throw Error("finite difference step must be > 0");
  }
  const Evaluator eval(input, gt, w);
  std::vector<double> params = flatten_params(bank);
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + step;
    const double up = eval.loss(unflatten_params(bank, params));
    params[k] = saved - step;
    const double down = eval.loss(unflatten_params(bank, params));
    params[k] = saved;
    grad[k] = (up - down) / (2.0 * step);
  }

  LutGradient g;
  std::size_t k = 0;
  const std::size_t s_lut = static_cast<std::size_t>(bank.s_lut());
  auto take = [&](std::vector<double> & dst) {
    dst.assign(grad.begin() + static_cast<std::ptrdiff_t>(k), grad.begin() + static_cast<std::ptrdiff_t>(k + s_lut));
    k += s_lut;
  };
  g.sets.resize(bank.sets.size());
  for (auto & set : g.sets) {
    take(set.h);
    take(set.s);
    take(set.v);
  }
  g.weights.assign(grad.begin() + static_cast<std::ptrdiff_t>(k), grad.end());
  return g;
}

FitResult fit_luts(const FlareSample & sample, const FitConfig & cfg)
{
  return fit_luts(sample.input, sample.gt, &sample.mask, cfg);
}

FitResult fit_luts(const RgbImage & input, const RgbImage & gt, const BinaryMask * mask, const FitConfig & cfg)
{
  cfg.validate();
  check_pair(input, gt);
  const HsvImage hsv = rgb_to_hsv(input);
  const Evaluator eval(hsv, gt, cfg.weights);

  FitResult result;
  LutBank bank = LutBank::identity(cfg.n_l, cfg.s_lut);
  double loss = eval.loss(bank);
  if (std::isnan(loss)) {
    throw Error("divergent loss (NaN) at iteration 0");
  }
  result.trace.push_back({0, loss, 0.0});

  double step = cfg.step;
  std::vector<double> params = flatten_params(bank);
  const std::vector<double> cover = coverage(hsv, bank);
  // Per-parameter damping: a coordinate whose direction flips sign is
  // bouncing across an L1 kink, so its share of the step halves; it grows
  // back while the sign holds. Without this a few parameters sitting at
  // their optimum set the normalization and starve the rest.
  std::vector<double> damping(params.size(), 1.0);
  std::vector<double> previous(params.size(), 0.0);
  for (int iter = 1; iter <= cfg.max_iters && loss > 0.0; ++iter) {
    std::vector<double> grad = descent_direction(eval, bank, cover);
    if (std::all_of(grad.begin(), grad.end(), [](double g) { return g == 0.0; })) {
      break;
    }
    for (std::size_t k = 0; k < grad.size(); ++k) {
      if (grad[k] * previous[k] < 0.0) {
        damping[k] *= 0.5;
      } else if (grad[k] * previous[k] > 0.0) {
        damping[k] = std::min(1.0, 2.0 * damping[k]);
      }
      previous[k] = grad[k];
      grad[k] *= damping[k];
    }

    double scale = 0.0;
    for (const double g : grad) {
      scale = std::max(scale, std::fabs(g));
    }

    bool accepted = false;
    LutBank trial;
    double trial_loss = loss;
    for (int halving = 0; halving <= 20; ++halving) {
      std::vector<double> moved(params.size());
      for (std::size_t k = 0; k < params.size(); ++k) {
        moved[k] = params[k] - step * grad[k] / scale;
      }
      trial = project(unflatten_params(bank, moved));
      trial_loss = eval.loss(trial);
      if (std::isnan(trial_loss)) {
        throw Error("divergent loss (NaN) at iteration " + std::to_string(iter));
      }
      if (trial_loss < loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;
    }

    const double decrease = (loss - trial_loss) / loss;
    bank = std::move(trial);
    params = flatten_params(bank);
    loss = trial_loss;
    result.trace.push_back({iter, loss, step});
    step = std::min(2.0 * step, cfg.step);
    if (decrease < cfg.tol) {
      break;
    }
  }

  result.output = eval.render(bank);
  result.metrics = evaluate(result.output, gt, &input, mask);
  result.bank = std::move(bank);
  return result;
}

std::string trace_csv(const std::vector<TracePoint> & trace)
{
  std::ostringstream out;
  out.precision(17);
  out << "iteration,loss,step\n";
  for (const TracePoint & t : trace) {
    out << t.iteration << ',' << t.loss << ',' << t.step << '\n';
  }
  return out.str();
}

}  // namespace flarekit
