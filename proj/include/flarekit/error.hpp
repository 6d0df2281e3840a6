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

#ifndef FLAREKIT__ERROR_HPP_
#define FLAREKIT__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace flarekit
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Two rasters (or a raster and a tensor) disagree on shape.
class ShapeError : public Error
{
public:
  using Error::Error;
};

/// A metric has no defined value for its input, e.g. an empty mask region.
class UndefinedMetric : public Error
{
public:
  UndefinedMetric() : Error("undefined metric") {}
  explicit UndefinedMetric(const std::string & what) : Error("undefined metric: " + what) {}
};

}  // namespace flarekit

#endif  // FLAREKIT__ERROR_HPP_
