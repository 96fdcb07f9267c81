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

#ifndef HSFPN_PYRAMID_IO_H_
#define HSFPN_PYRAMID_IO_H_

#include <filesystem>
#include <string>

#include "hsfpn/pyramid.h"

namespace hsfpn {

// A pyramid directory holds <prefix>2.pft .. <prefix>5.pft and a
// manifest.json:
//
//   {"format": "PFT1",
//    "levels": [{"level": 2, "file": "c2.pft", "channels": 256,
//                "dims": [1, 256, 64, 64]}, ...]}
//
// Reading checks every file against its manifest entry and the pyramid
// nesting rule.
FeaturePyramid read_pyramid_dir(const std::filesystem::path& dir,
                                const std::string& prefix = "c");
void write_pyramid_dir(const std::filesystem::path& dir,
                       const FeaturePyramid& pyramid,
                       const std::string& prefix = "p");

// A weights directory holds one PFT1 file per named tensor and a
// manifest.json with the pyramid configuration:
//
//   {"format": "PFT1",
//    "config": {"channels": 256, "mode": "hsfpn", ...},
//    "tensors": [{"name": "l2.lateral.weight",
//                 "file": "l2.lateral.weight.pft", "dims": [...]}, ...]}
//
// Loading rebuilds the layer layout from the config and then requires every
// tensor of that layout to be present with matching dims.
void save_weights(const std::filesystem::path& dir,
                  const PyramidWeights& weights);
PyramidWeights load_weights(const std::filesystem::path& dir);

std::string config_to_json(const PyramidConfig& config);
PyramidConfig config_from_json(const std::string& text);

}  // namespace hsfpn

#endif  // HSFPN_PYRAMID_IO_H_
