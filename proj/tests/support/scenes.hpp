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

#ifndef FLAREKIT_TESTS__SCENES_HPP_
#define FLAREKIT_TESTS__SCENES_HPP_

#include <cstdint>

#include "flarekit/image.hpp"

namespace flarekit::testing
{

/// size x size gray background (value bg) with one white disc of the given
/// radius centered at (cx, cy). Pixel centers at integer coordinates.
RgbImage disc_scene(int size, double cx, double cy, double radius, double bg);

/// Seeded clean scene: stripes of two saturated hues (blue and red-orange,
/// neither purple) plus two or three small white highlights near corners.
RgbImage highlight_scene(int size, std::uint64_t seed);

/// Uniformly random pixels in [0,1].
RgbImage random_image(int width, int height, std::uint64_t seed);

}  // namespace flarekit::testing

#endif  // FLAREKIT_TESTS__SCENES_HPP_
