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

#ifndef FLAREKIT__IMAGE_IO_HPP_
#define FLAREKIT__IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>

#include "flarekit/image.hpp"

namespace flarekit
{

/// 8-bit quantization used at every file boundary: round(v * 255), clamped.
std::uint8_t to_byte(double v);
inline double from_byte(std::uint8_t b) { return b / 255.0; }

// 8-bit PNG. Any PNG layout is accepted on load (gray is replicated,
// alpha composited onto black, 16-bit reduced to 8). Saving writes 8-bit RGB,
// so identical pixels always give identical file bytes.
RgbImage read_png(const std::filesystem::path & path);
void write_png(const std::filesystem::path & path, const RgbImage & img);

/// Masks are stored as 0/255 gray; any nonzero sample reads back as 1.
BinaryMask read_mask_png(const std::filesystem::path & path);
void write_mask_png(const std::filesystem::path & path, const BinaryMask & mask);

}  // namespace flarekit

#endif  // FLAREKIT__IMAGE_IO_HPP_
