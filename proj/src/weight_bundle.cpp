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

#include "flarekit/weight_bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

namespace flarekit
{

namespace
{

constexpr char kMagic[4] = {'N', 'T', 'C', '1'};

class Writer
{
public:
  void bytes(const void * src, std::size_t n)
  {
    const auto * p = static_cast<const std::uint8_t *>(src);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void little(T value)
  {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>((value >> (8 * i)) & 0xFF));
    }
  }
  void f32(float value) { little(std::bit_cast<std::uint32_t>(value)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

private:
  std::vector<std::uint8_t> out_;
};

class Reader
{
public:
  explicit Reader(const std::vector<std::uint8_t> & in) : in_(in) {}

  const std::uint8_t * take(std::size_t n)
  {
    if (n > in_.size() - pos_) {
      throw Error("truncated NTC data");
    }
    const std::uint8_t * p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  template <typename T>
  T little()
  {
    const std::uint8_t * p = take(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value = static_cast<T>(value | (static_cast<T>(p[i]) << (8 * i)));
    }
    return value;
  }
  float f32() { return std::bit_cast<float>(little<std::uint32_t>()); }
  bool done() const { return pos_ == in_.size(); }

private:
  const std::vector<std::uint8_t> & in_;
  std::size_t pos_ = 0;
};

std::string shape_to_string(const std::vector<std::uint32_t> & shape)
{
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    s += (i == 0 ? "" : ", ") + std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace

Tensor::Tensor(std::vector<std::uint32_t> dims, float fill) : shape(std::move(dims))
{
  data.assign(numel(), fill);
}

std::size_t Tensor::numel() const
{
  return std::accumulate(
    shape.begin(), shape.end(), std::size_t{1},
    [](std::size_t acc, std::uint32_t d) { return acc * d; });
}

std::string Tensor::shape_string() const { return shape_to_string(shape); }

void WeightBundle::set(const std::string & name, Tensor tensor)
{
  if (name.empty() || name.size() > 0xFFFF) {
    throw Error("invalid tensor name length");
  }
  if (tensor.shape.size() > 0xFF) {
    throw Error("tensor " + name + " has too many dimensions");
  }
  if (tensor.data.size() != tensor.numel()) {
    throw ShapeError("tensor " + name + ": data size does not match shape " + tensor.shape_string());
  }
  tensors_[name] = std::move(tensor);
}

bool WeightBundle::contains(const std::string & name) const { return tensors_.count(name) != 0; }

const Tensor & WeightBundle::get(const std::string & name) const
{
  const auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw MissingTensor("missing tensor '" + name + "'");
  }
  return it->second;
}

const Tensor & WeightBundle::require(
  const std::string & name, const std::vector<std::uint32_t> & shape) const
{
  const Tensor & t = get(name);
  if (t.shape != shape) {
    throw MissingTensor(
      "tensor '" + name + "' has shape " + t.shape_string() + ", expected " +
      shape_to_string(shape));
  }
  return t;
}

const Tensor & WeightBundle::require_rank(const std::string & name, std::size_t rank) const
{
  const Tensor & t = get(name);
  if (t.shape.size() != rank) {
    throw MissingTensor(
      "tensor '" + name + "' has rank " + std::to_string(t.shape.size()) + ", expected " +
      std::to_string(rank));
  }
  return t;
}

std::vector<std::uint8_t> WeightBundle::serialize() const
{
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.little(static_cast<std::uint32_t>(tensors_.size()));
  for (const auto & [name, tensor] : tensors_) {
    w.little(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.little(static_cast<std::uint8_t>(tensor.shape.size()));
    for (const std::uint32_t d : tensor.shape) {
      w.little(d);
    }
    for (const float v : tensor.data) {
      w.f32(v);
    }
  }
  return w.take();
}

WeightBundle WeightBundle::deserialize(const std::vector<std::uint8_t> & bytes)
{
  Reader r(bytes);
  if (std::memcmp(r.take(sizeof(kMagic)), kMagic, sizeof(kMagic)) != 0) {
    throw Error("not an NTC1 container");
  }
  WeightBundle bundle;
  const auto count = r.little<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = r.little<std::uint16_t>();
    const std::uint8_t * name_bytes = r.take(name_len);
    std::string name(reinterpret_cast<const char *>(name_bytes), name_len);
    Tensor t;
    const auto rank = r.little<std::uint8_t>();
    t.shape.resize(rank);
    for (auto & d : t.shape) {
      d = r.little<std::uint32_t>();
    }
    t.data.resize(t.numel());
    for (auto & v : t.data) {
      v = r.f32();
    }
    if (bundle.contains(name)) {
      throw Error("duplicate tensor '" + name + "' in NTC data");
    }
    bundle.set(name, std::move(t));
  }
  if (!r.done()) {
    throw Error("trailing bytes after NTC data");
  }
  return bundle;
}

void WeightBundle::save(const std::filesystem::path & path) const
{
  const auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

WeightBundle WeightBundle::load(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  const std::vector<std::uint8_t> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize(bytes);
  } catch (const Error & e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace flarekit
