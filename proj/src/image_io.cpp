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

#include "flarekit/image_io.hpp"

#include <png.h>

#include <cmath>
#include <string>
#include <vector>

namespace flarekit
{

namespace
{

struct Decoded
{
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> pixels;
};

Decoded decode(const std::filesystem::path & path, bool gray)
{
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(path.string() + ": " + msg);
  }
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  // Inputs with alpha are composited onto black.
  Decoded out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.channels = gray ? 1 : 3;
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  png_color black{0, 0, 0};
  if (png_image_finish_read(&image, &black, out.pixels.data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(path.string() + ": " + msg);
  }
  return out;
}

void encode(
  const std::filesystem::path & path, int width, int height, int channels,
  const std::vector<std::uint8_t> & pixels)
{
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error("cannot write " + path.string() + ": " + msg);
  }
}

}  // namespace

std::uint8_t to_byte(double v)
{
  const double scaled = std::round(v * 255.0);
  if (!(scaled > 0.0)) {
    return 0;
  }
  return scaled >= 255.0 ? 255 : static_cast<std::uint8_t>(scaled);
}

RgbImage read_png(const std::filesystem::path & path)
{
  const Decoded d = decode(path, false);
  RgbImage img(d.width, d.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (d.channels == 3) {
      img[i] = {from_byte(d.pixels[3 * i]), from_byte(d.pixels[3 * i + 1]),
                from_byte(d.pixels[3 * i + 2])};
    } else {
      const double v = from_byte(d.pixels[i]);
      img[i] = {v, v, v};
    }
  }
  return img;
}

void write_png(const std::filesystem::path & path, const RgbImage & img)
{
  std::vector<std::uint8_t> bytes(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    bytes[3 * i] = to_byte(img[i].r);
    bytes[3 * i + 1] = to_byte(img[i].g);
    bytes[3 * i + 2] = to_byte(img[i].b);
  }
  encode(path, img.width(), img.height(), 3, bytes);
}

BinaryMask read_mask_png(const std::filesystem::path & path)
{
  const Decoded d = decode(path, true);
  BinaryMask mask(d.width, d.height);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const std::size_t base = i * static_cast<std::size_t>(d.channels);
    bool on = false;
    for (int c = 0; c < d.channels; ++c) {
      on = on || d.pixels[base + static_cast<std::size_t>(c)] != 0;
    }
    mask[i] = on ? 1 : 0;
  }
  return mask;
}

void write_mask_png(const std::filesystem::path & path, const BinaryMask & mask)
{
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    bytes[i] = mask[i] != 0 ? 255 : 0;
  }
  encode(path, mask.width(), mask.height(), 1, bytes);
}

}  // namespace flarekit
