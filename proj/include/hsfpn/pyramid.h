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

#ifndef HSFPN_PYRAMID_H_
#define HSFPN_PYRAMID_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsfpn/frequency.h"
#include "hsfpn/hfp.h"
#include "hsfpn/ops.h"
#include "hsfpn/sdp.h"
#include "hsfpn/tensor.h"

namespace hsfpn {

enum class FusionMode {
  kSdpOnly,     // P_i = out(sdp(h_i, P_{i+1}))
  kSdpPlusAdd,  // P_i = out(sdp(h_i, P_{i+1}) + up(P_{i+1}))
};

enum class PyramidMode {
  kHsfpn,
  kFpnBaseline,  // P_i = out(C_i + up(P_{i+1})), P_5 = out(C_5)
};

std::string_view to_string(FusionMode mode);
std::string_view to_string(PyramidMode mode);
FusionMode parse_fusion_mode(std::string_view text);
PyramidMode parse_pyramid_mode(std::string_view text);

struct PyramidConfig {
  std::size_t channels = 256;
  // Backbone channel counts of levels 2..5, consumed by the laterals.
  std::array<std::size_t, kNumLevels> in_channels = {256, 512, 1024, 2048};

  double alpha = 0.25;
  std::array<bool, kNumLevels> filter_levels = {true, true, false, false};
  std::size_t k = 16;
  std::size_t cp_groups = 16;

  FusionMode fusion = FusionMode::kSdpOnly;
  PyramidMode mode = PyramidMode::kHsfpn;

  // Component switches; all ignored (off) in kFpnBaseline mode.
  bool channel_path = true;
  bool spatial_path = true;
  bool sdp = true;

  bool conv_bias = true;
  bool sdp_bias = false;
  bool squash_masks = false;

  std::uint64_t seed = 0;

  void validate() const;
  FilterSpec filter() const;
  bool hfp_enabled() const {
    return mode == PyramidMode::kHsfpn && (channel_path || spatial_path);
  }
  bool sdp_enabled() const { return mode == PyramidMode::kHsfpn && sdp; }
};

// Four NCHW maps for levels 2..5 (C_2..C_5 or P_2..P_5).
struct FeaturePyramid {
  std::array<Tensor, kNumLevels> levels;

  Tensor& at(int level);
  const Tensor& at(int level) const;

  // Rank 4 everywhere, shared batch, and H_i = 2 H_{i+1}, W_i = 2 W_{i+1}.
  // Violations raise ShapeError naming the offending level.
  void validate_nesting() const;

  // validate_nesting() plus every level having `channels` channels.
  void validate(std::size_t channels) const;
};

struct LevelWeights {
  ConvLayer lateral;
  std::optional<HfpParams> hfp;
  // Block extents are filled in from C_5 at forward time.
  std::optional<SdpParams> sdp;
  ConvLayer output;
};

struct PyramidWeights {
  PyramidConfig config;
  std::array<LevelWeights, kNumLevels> levels;

  LevelWeights& at(int level);
  const LevelWeights& at(int level) const;

  // Every learned tensor under a stable name such as "l3.hfp.fuse.weight".
  std::vector<std::pair<std::string, Tensor*>> named_tensors();
  std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;

  std::size_t param_count() const;
};

// Seeded fan-in scaled uniform weights. Every layer draws from its own
// stream derived from (seed, level, layer), so layers shared by both modes
// get identical weights in kHsfpn and kFpnBaseline.
PyramidWeights init_weights(const PyramidConfig& config);

// 1x1 lateral convs reducing backbone features to config.channels.
FeaturePyramid build_laterals(const FeaturePyramid& backbone,
                              const PyramidWeights& weights);

// Intermediate values recorded by hsfpn_forward.
struct ForwardTrace {
  // Input of each level's output conv.
  std::array<Tensor, kNumLevels> fused;
  // Wall time in milliseconds per stage ("hfp", "sdp", "fusion", "output").
  std::map<std::string, double> timing_ms;
};

// Top-down pass over the lateral pyramid. Output extents and channels equal
// the input's at every level. A level smaller than the channel-path pooling
// grid pools to its own extent instead (k is clamped to min(H, W)).
FeaturePyramid hsfpn_forward(const FeaturePyramid& laterals,
                             const PyramidWeights& weights,
                             ForwardTrace* trace = nullptr);

// Deterministic random backbone features: level i has in_channels[i-2]
// channels and extents (base_h >> (i-2)) x (base_w >> (i-2)).
FeaturePyramid random_pyramid(
    std::size_t batch, const std::array<std::size_t, kNumLevels>& channels,
    std::size_t base_h, std::size_t base_w, std::uint64_t seed);

}  // namespace hsfpn

#endif  // HSFPN_PYRAMID_H_
