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

#ifndef FLAREKIT__FIT_HPP_
#define FLAREKIT__FIT_HPP_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flarekit/image.hpp"
#include "flarekit/losses.hpp"
#include "flarekit/lut.hpp"
#include "flarekit/metrics.hpp"
#include "flarekit/synthesis.hpp"

namespace flarekit
{

struct FitConfig
{
  int n_l = 1;
  int s_lut = kDefaultLutSize;
  LossWeights weights{1.0, 0.0, 2.0, 0.0};
  /// Largest single-parameter change per iteration (the gradient is scaled
  /// so its largest component moves by exactly this much).
  double step = 0.05;
  int max_iters = 500;
  double tol = 1e-6;  ///< stop once the relative loss decrease falls below this
  /// Recorded with the result. The descent itself has no random component.
  std::uint64_t seed = 0;

  void validate() const;
};

/// Missing keys keep their defaults.
FitConfig fit_config_from_json(const nlohmann::json & j);
nlohmann::json to_json(const FitConfig & cfg);

/// Same layout as LutBank: one entry per control point and per weight.
struct LutGradient
{
  struct Set
  {
    std::vector<double> h;
    std::vector<double> s;
    std::vector<double> v;
  };
  std::vector<Set> sets;
  std::vector<double> weights;

  /// Set-major, then h, s, v, then the weights.
  std::vector<double> flatten() const;
};

/// Parameters of a bank in LutGradient::flatten order.
std::vector<double> flatten_params(const LutBank & bank);
LutBank unflatten_params(const LutBank & shape, const std::vector<double> & params);

/// Loss of hsv_to_rgb(correct_hsv(input, bank)) against gt with the penalty
/// mask taken from gt. The weights are used as given (no renormalization),
/// so the bank need not be on the simplex.
double lut_loss(const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w);

/// Analytic (sub)gradient of lut_loss. Clamps pass the gradient through at
/// their bounds; absolute values take slope 0 at zero.
LutGradient lut_loss_gradient(
  const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w);

/// Central differences of lut_loss.
LutGradient finite_diff_gradient(
  const HsvImage & input, const RgbImage & gt, const LutBank & bank, const LossWeights & w,
  double step = 1e-4);

struct TracePoint
{
  int iteration = 0;
  double loss = 0.0;
  double step = 0.0;  ///< step length that was accepted, 0 for the starting point
};

struct FitResult
{
  LutBank bank;
  std::vector<TracePoint> trace;
  MetricsReport metrics;
  RgbImage output;
};

/// Gradient descent from identity curves and uniform weights. Each
/// iteration backtracks (halving up to 20 times) until the loss decreases;
/// after an accepted move the step doubles again, up to cfg.step. A
/// parameter whose direction flips sign between iterations gets half the
/// share of the step it had, and regains it while the sign holds. Stops on
/// max_iters, a relative decrease below tol, zero loss or a failed line
/// search. Throws Error naming the iteration if the loss becomes NaN.
FitResult fit_luts(const FlareSample & sample, const FitConfig & cfg);

/// Same, for a bare pair; mask may be null (PSNR-F/NF then stay empty and
/// HAE uses the input's flare region).
FitResult fit_luts(const RgbImage & input, const RgbImage & gt, const BinaryMask * mask, const FitConfig & cfg);

/// "iteration,loss,step" header plus one row per trace point.
std::string trace_csv(const std::vector<TracePoint> & trace);

}  // namespace flarekit

#endif  // FLAREKIT__FIT_HPP_
