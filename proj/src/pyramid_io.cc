// Copyright 2026 The hsfpn Authors. All Rights Reserved.
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

#include "hsfpn/pyramid_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "hsfpn/errors.h"
#include "hsfpn/tensor_io.h"
#include "json.hpp"

namespace hsfpn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifest = "manifest.json";

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), e.byte);
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json config_json(const PyramidConfig& c) {
  return {{"channels", c.channels},
          {"in_channels", c.in_channels},
          {"alpha", c.alpha},
          {"filter_levels", c.filter_levels},
          {"k", c.k},
          {"cp_groups", c.cp_groups},
          {"fusion", to_string(c.fusion)},
          {"mode", to_string(c.mode)},
          {"channel_path", c.channel_path},
          {"spatial_path", c.spatial_path},
          {"sdp", c.sdp},
          {"conv_bias", c.conv_bias},
          {"sdp_bias", c.sdp_bias},
          {"squash_masks", c.squash_masks},
          {"seed", c.seed}};
}

PyramidConfig config_from(const json& j) {
  PyramidConfig c;
  try {
    c.channels = j.at("channels").get<std::size_t>();
    c.in_channels = j.at("in_channels").get<decltype(c.in_channels)>();
    c.alpha = j.at("alpha").get<double>();
    c.filter_levels = j.at("filter_levels").get<decltype(c.filter_levels)>();
    c.k = j.at("k").get<std::size_t>();
    c.cp_groups = j.at("cp_groups").get<std::size_t>();
    c.fusion = parse_fusion_mode(j.at("fusion").get<std::string>());
    c.mode = parse_pyramid_mode(j.at("mode").get<std::string>());
    c.channel_path = j.at("channel_path").get<bool>();
    c.spatial_path = j.at("spatial_path").get<bool>();
    c.sdp = j.at("sdp").get<bool>();
    c.conv_bias = j.at("conv_bias").get<bool>();
    c.sdp_bias = j.at("sdp_bias").get<bool>();
    c.squash_masks = j.at("squash_masks").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("pyramid config: ") + e.what());
  }
  c.validate();
  return c;
}

Tensor::Dims dims_from(const json& j, const std::string& what) {
  try {
    return j.get<Tensor::Dims>();
  } catch (const json::exception&) {
    throw ValidationError(what + ": dims must be a list of extents");
  }
}

}  // namespace

FeaturePyramid read_pyramid_dir(const fs::path& dir,
                                const std::string& prefix) {
  const json manifest = read_json(dir / kManifest);
  if (manifest.value("format", "") != "PFT1" || !manifest.contains("levels") ||
      !manifest["levels"].is_array()) {
    throw ValidationError((dir / kManifest).string() +
                          ": expected format PFT1 and a levels list");
  }
  FeaturePyramid pyr;
  std::set<int> seen;
  for (const json& entry : manifest["levels"]) {
    const int level = entry.value("level", 0);
    check_level(level);
    if (!seen.insert(level).second) {
      throw ValidationError("manifest lists level " + std::to_string(level) +
                            " twice");
    }
    const std::string file =
        entry.value("file", prefix + std::to_string(level) + ".pft");
    Tensor t = read_pft(dir / file);
    if (entry.contains("dims") && dims_from(entry["dims"], file) != t.dims()) {
      throw ShapeError("level " + std::to_string(level) + ": " + file +
                       " has dims " + dims_to_string(t.dims()) +
                       ", manifest says " +
                       dims_to_string(dims_from(entry["dims"], file)));
    }
    if (t.rank() == 4 && entry.contains("channels") &&
        entry["channels"].get<std::size_t>() != t.c()) {
      throw ShapeError("level " + std::to_string(level) +
                       ": channel count disagrees with manifest");
    }
    pyr.at(level) = std::move(t);
  }
  if (seen.size() != kNumLevels) {
    throw ValidationError("manifest must list levels 2..5");
  }
  pyr.validate_nesting();
  return pyr;
}

void write_pyramid_dir(const fs::path& dir, const FeaturePyramid& pyramid,
                       const std::string& prefix) {
  pyramid.validate_nesting();
  fs::create_directories(dir);
  json manifest{{"format", "PFT1"}, {"levels", json::array()}};
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const Tensor& t = pyramid.at(level);
    const std::string file = prefix + std::to_string(level) + ".pft";
    write_pft(dir / file, t);
    manifest["levels"].push_back({{"level", level},
                                  {"file", file},
                                  {"channels", t.c()},
                                  {"dims", t.dims()}});
  }
  write_json(dir / kManifest, manifest);
}

void save_weights(const fs::path& dir, const PyramidWeights& weights) {
  fs::create_directories(dir);
  json manifest{{"format", "PFT1"},
                {"config", config_json(weights.config)},
                {"tensors", json::array()}};
  for (const auto& [name, tensor] : weights.named_tensors()) {
    const std::string file = name + ".pft";
    write_pft(dir / file, *tensor);
    manifest["tensors"].push_back(
        {{"name", name}, {"file", file}, {"dims", tensor->dims()}});
  }
  write_json(dir / kManifest, manifest);
}

PyramidWeights load_weights(const fs::path& dir) {
  const json manifest = read_json(dir / kManifest);
  if (manifest.value("format", "") != "PFT1" || !manifest.contains("config") ||
      !manifest.contains("tensors")) {
    throw ValidationError((dir / kManifest).string() +
                          ": expected format PFT1 with config and tensors");
  }
  PyramidWeights weights = init_weights(config_from(manifest["config"]));
  std::map<std::string, std::string> files;
  for (const json& entry : manifest["tensors"]) {
    files[entry.at("name").get<std::string>()] =
        entry.at("file").get<std::string>();
  }
  for (auto& [name, slot] : weights.named_tensors()) {
    const auto it = files.find(name);
    if (it == files.end()) {
      throw ValidationError("weights manifest is missing tensor " + name);
    }
    Tensor t = read_pft(dir / it->second);
    if (t.dims() != slot->dims()) {
      throw ShapeError("weight " + name + " has dims " +
                       dims_to_string(t.dims()) + ", expected " +
                       dims_to_string(slot->dims()));
    }
    *slot = std::move(t);
    files.erase(it);
  }
  if (!files.empty()) {
    throw ValidationError("weights manifest has unknown tensor " +
                          files.begin()->first);
  }
  return weights;
}

std::string config_to_json(const PyramidConfig& config) {
  return config_json(config).dump(2);
}

PyramidConfig config_from_json(const std::string& text) {
  try {
    return config_from(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("pyramid config: ") + e.what(), e.byte);
  }
}

}  // namespace hsfpn
