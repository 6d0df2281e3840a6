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

#include "common.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

namespace flarekit::cli
{

namespace
{

std::mutex log_mutex;

bool is_png(const fs::path & p)
{
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

}  // namespace

void log_line(const std::string & text)
{
  const std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << "flarekit: " << text << '\n';
}

void require_exists(const fs::path & path, const std::string & flag)
{
  if (!fs::exists(path)) {
    throw UsageError(flag + ": no such file or directory: " + path.string());
  }
}

std::vector<std::string> list_pngs(const fs::path & dir, bool recursive)
{
  std::vector<std::string> out;
  auto visit = [&](const fs::directory_entry & e) {
    if (e.is_regular_file() && is_png(e.path())) {
      out.push_back(fs::relative(e.path(), dir).generic_string());
    }
  };
  if (recursive) {
    for (const auto & e : fs::recursive_directory_iterator(dir)) {
      visit(e);
    }
  } else {
    for (const auto & e : fs::directory_iterator(dir)) {
      visit(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json read_json_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception & e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw Error("cannot write " + path.string());
  }
}

}  // namespace flarekit::cli
