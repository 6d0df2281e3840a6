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

#ifndef FLAREKIT__IMAGE_HPP_
#define FLAREKIT__IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flarekit/error.hpp"

namespace flarekit
{

/// Single-channel row-major raster.
template <typename T>
class Plane
{
public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
  : width_(width), height_(height), data_(checked_size(width, height), fill)
  {
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T & operator()(int x, int y) { return data_[index(x, y)]; }
  const T & operator()(int x, int y) const { return data_[index(x, y)]; }
  T & operator[](std::size_t i) { return data_[i]; }
  const T & operator[](std::size_t i) const { return data_[i]; }

  /// Edge-replicating accessor: coordinates are clamped into the raster.
  const T & clamped(int x, int y) const
  {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  template <typename U>
  bool same_shape(const Plane<U> & other) const
  {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Plane &) const = default;

private:
  static std::size_t checked_size(int width, int height)
  {
    if (width < 0 || height < 0) {
      throw ShapeError("negative raster dimensions");
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Luma in [0,1].
using GrayImage = Plane<double>;
/// Non-negative real weights (blurred bands, radial falloff, alpha).
using SoftMask = Plane<double>;
/// Exactly 0 or 1 per pixel.
using BinaryMask = Plane<std::uint8_t>;

struct Rgb
{
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  bool operator==(const Rgb &) const = default;
};

/// Interleaved RGB raster. Channel values are nominally in [0,1]; the
/// residual-feature planes of the fusion stage reuse this type and may
/// leave that range.
using RgbImage = Plane<Rgb>;

/// Hue in degrees [0,360), saturation and value in [0,1], one plane each.
struct HsvImage
{
  Plane<double> h;
  Plane<double> s;
  Plane<double> v;

  HsvImage() = default;
  HsvImage(int width, int height) : h(width, height), s(width, height), v(width, height) {}

  int width() const { return h.width(); }
  int height() const { return h.height(); }
};

struct Lab
{
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// CIELAB raster (L* in [0,100]).
using LabImage = Plane<Lab>;

template <typename A, typename B>
void require_same_shape(const Plane<A> & a, const Plane<B> & b, const std::string & what)
{
  if (!a.same_shape(b)) {
    throw ShapeError(
      what + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
      std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
      std::to_string(b.height()) + ")");
  }
}

}  // namespace flarekit

#endif  // FLAREKIT__IMAGE_HPP_
