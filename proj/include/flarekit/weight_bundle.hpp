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

#ifndef FLAREKIT__WEIGHT_BUNDLE_HPP_
#define FLAREKIT__WEIGHT_BUNDLE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "flarekit/error.hpp"

namespace flarekit
{

struct Tensor
{
  std::vector<std::uint32_t> shape;
  std::vector<float> data;  ///< row-major

  Tensor() = default;
  explicit Tensor(std::vector<std::uint32_t> dims, float fill = 0.0f);

  std::size_t numel() const;
  std::string shape_string() const;

  bool operator==(const Tensor &) const = default;
};

/// Thrown when a consumer-declared tensor is absent or has the wrong shape.
class MissingTensor : public Error
{
public:
  using Error::Error;
};

/// Named tensors, kept in name order so serialization is canonical.
///
/// On disk ("NTC" container, all integers little-endian):
///   "NTC1" | u32 count | count x { u16 name_len | name (UTF-8) | u8 rank |
///   rank x u32 dim | prod(dims) x f32 }
class WeightBundle
{
public:
  void set(const std::string & name, Tensor tensor);
  bool contains(const std::string & name) const;

  /// Throws MissingTensor naming the tensor when it is absent.
  const Tensor & get(const std::string & name) const;
  /// As get(), additionally checking the exact shape.
  const Tensor & require(const std::string & name, const std::vector<std::uint32_t> & shape) const;
  /// As get(), checking only the rank; returns the tensor for shape inference.
  const Tensor & require_rank(const std::string & name, std::size_t rank) const;

  const std::map<std::string, Tensor> & tensors() const { return tensors_; }

  std::vector<std::uint8_t> serialize() const;
  static WeightBundle deserialize(const std::vector<std::uint8_t> & bytes);

  void save(const std::filesystem::path & path) const;
  static WeightBundle load(const std::filesystem::path & path);

  bool operator==(const WeightBundle &) const = default;

private:
  std::map<std::string, Tensor> tensors_;
};

}  // namespace flarekit

#endif  // FLAREKIT__WEIGHT_BUNDLE_HPP_
