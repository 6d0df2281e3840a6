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

#include "flarekit/manifest.hpp"

#include <fstream>

namespace flarekit
{

nlohmann::json to_json(const SynthParams & params)
{
  return {{"highlight_pct", params.highlight_pct},
          {"grad_thresh", params.grad_thresh},
          {"edge_width", params.edge_width},
          {"strength", params.strength},
          {"gamma", params.gamma},
          {"purple", {params.purple.r, params.purple.g, params.purple.b}},
          {"seed", params.seed},
          {"jitter", params.jitter}};
}

SynthParams synth_params_from_json(const nlohmann::json & j)
{
  SynthParams p;
  try {
    if (!j.is_object()) {
      throw Error("synthesis parameters must be a JSON object");
    }
    p.highlight_pct = j.value("highlight_pct", p.highlight_pct);
    p.grad_thresh = j.value("grad_thresh", p.grad_thresh);
    p.edge_width = j.value("edge_width", p.edge_width);
    p.strength = j.value("strength", p.strength);
    p.gamma = j.value("gamma", p.gamma);
    p.seed = j.value("seed", p.seed);
    p.jitter = j.value("jitter", p.jitter);
    if (j.contains("purple")) {
      const auto c = j.at("purple").get<std::vector<double>>();
      if (c.size() != 3) {
        throw Error("purple must have 3 channels");
      }
      p.purple = {c[0], c[1], c[2]};
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed synthesis parameters: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json to_json(const ManifestRecord & record)
{
  return {{"scene_id", record.scene_id},
          {"frame_id", record.frame_id},
          {"input_path", record.input_path},
          {"gt_path", record.gt_path},
          {"mask_path", record.mask_path},
          {"params", to_json(record.params)},
          {"split", record.split ? nlohmann::json(*record.split) : nlohmann::json(nullptr)}};
}

ManifestRecord manifest_record_from_json(const nlohmann::json & j)
{
  ManifestRecord r;
  try {
    r.scene_id = j.at("scene_id").get<std::string>();
    r.frame_id = j.at("frame_id").get<std::string>();
    r.input_path = j.at("input_path").get<std::string>();
    r.gt_path = j.at("gt_path").get<std::string>();
    r.mask_path = j.at("mask_path").get<std::string>();
    r.params = synth_params_from_json(j.value("params", nlohmann::json::object()));
    if (j.contains("split") && !j.at("split").is_null()) {
      r.split = j.at("split").get<std::string>();
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed manifest record: ") + e.what());
  }
  return r;
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open manifest " + path.string());
  }
  std::vector<ManifestRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      records.push_back(manifest_record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception & e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_manifest(const std::filesystem::path & path, const std::vector<ManifestRecord> & records)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write manifest " + path.string());
  }
  for (const ManifestRecord & r : records) {
    out << to_json(r).dump() << '\n';
  }
  if (!out) {
    throw Error("failed writing manifest " + path.string());
  }
}

}  // namespace flarekit
