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

#include "hsfpn/pyramid.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "hsfpn/errors.h"
#include "hsfpn/random.h"

namespace hsfpn {
namespace {

enum Stream : unsigned { kLateral = 0, kHfp = 1, kSdp = 2, kOutput = 3 };

std::uint64_t stream_seed(std::uint64_t seed, int level, unsigned stream) {
  // splitmix64 finaliser over (seed, level, stream).
  std::uint64_t z =
      seed + 0x9E3779B97F4A7C15ULL * (std::uint64_t(level) * 16 + stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t slot(int level) {
  check_level(level);
  return std::size_t(level - kMinLevel);
}

std::string level_prefix(int level) {
  return "level " + std::to_string(level) + ": ";
}

class StageTimer {
 public:
  StageTimer(ForwardTrace* trace, const char* stage)
      : trace_(trace),
        stage_(stage),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    if (!trace_) return;
    const auto end = std::chrono::steady_clock::now();
    trace_->timing_ms[stage_] +=
        std::chrono::duration<double, std::milli>(end - start_).count();
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  ForwardTrace* trace_;
  const char* stage_;
  std::chrono::steady_clock::time_point start_;
};

void add_layer(std::vector<std::pair<std::string, const Tensor*>>& out,
               const std::string& name, const ConvLayer& layer) {
  out.emplace_back(name + ".weight", &layer.weight);
  if (layer.bias) out.emplace_back(name + ".bias", &*layer.bias);
}

}  // namespace

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::kSdpOnly ? "sdp" : "sdp+add";
}

std::string_view to_string(PyramidMode mode) {
  return mode == PyramidMode::kHsfpn ? "hsfpn" : "fpn";
}

FusionMode parse_fusion_mode(std::string_view text) {
  if (text == "sdp" || text == "sdp_only") return FusionMode::kSdpOnly;
  if (text == "sdp+add" || text == "sdp_plus_add") {
    return FusionMode::kSdpPlusAdd;
  }
  throw ValidationError("unknown fusion mode '" + std::string(text) + "'");
}

PyramidMode parse_pyramid_mode(std::string_view text) {
  if (text == "hsfpn") return PyramidMode::kHsfpn;
  if (text == "fpn" || text == "fpn_baseline") return PyramidMode::kFpnBaseline;
  throw ValidationError("unknown pyramid mode '" + std::string(text) + "'");
}

void PyramidConfig::validate() const {
  if (channels == 0) throw ValidationError("channels must be positive");
  for (std::size_t c : in_channels) {
    if (c == 0) throw ValidationError("backbone channels must be positive");
  }
  if (k == 0) throw ValidationError("pooling extent k must be positive");
  if (cp_groups == 0 || channels % cp_groups != 0) {
    throw ValidationError("channel-path groups " + std::to_string(cp_groups) +
                          " must divide channels " + std::to_string(channels));
  }
  filter().validate();
}

FilterSpec PyramidConfig::filter() const {
  FilterSpec spec;
  spec.alpha = alpha;
  spec.enabled = filter_levels;
  return spec;
}

Tensor& FeaturePyramid::at(int level) { return levels[slot(level)]; }

const Tensor& FeaturePyramid::at(int level) const {
  return levels[slot(level)];
}

void FeaturePyramid::validate_nesting() const {
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const Tensor& t = at(level);
    if (t.rank() != 4) {
      throw ShapeError(level_prefix(level) + "expected an NCHW tensor, got " +
                       dims_to_string(t.dims()));
    }
    if (t.n() != at(kMinLevel).n()) {
      throw ShapeError(level_prefix(level) + "batch differs from level 2");
    }
    if (level == kMinLevel) continue;
    const Tensor& below = at(level - 1);
    if (below.h() != 2 * t.h() || below.w() != 2 * t.w()) {
      throw ShapeError(level_prefix(level) + "extents " +
                       std::to_string(t.h()) + "x" + std::to_string(t.w()) +
                       " are not half of level " + std::to_string(level - 1) +
                       "'s " + std::to_string(below.h()) + "x" +
                       std::to_string(below.w()));
    }
  }
}

void FeaturePyramid::validate(std::size_t channels) const {
  validate_nesting();
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    if (at(level).c() != channels) {
      throw ShapeError(level_prefix(level) + "has " +
                       std::to_string(at(level).c()) + " channels, expected " +
                       std::to_string(channels));
    }
  }
}

LevelWeights& PyramidWeights::at(int level) { return levels[slot(level)]; }

const LevelWeights& PyramidWeights::at(int level) const {
  return levels[slot(level)];
}

std::vector<std::pair<std::string, const Tensor*>>
PyramidWeights::named_tensors() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const LevelWeights& lw = at(level);
    const std::string p = "l" + std::to_string(level) + ".";
    add_layer(out, p + "lateral", lw.lateral);
    if (lw.hfp) {
      add_layer(out, p + "hfp.cp_avg", lw.hfp->cp_avg);
      add_layer(out, p + "hfp.cp_max", lw.hfp->cp_max);
      add_layer(out, p + "hfp.cp_merge", lw.hfp->cp_merge);
      add_layer(out, p + "hfp.spatial", lw.hfp->spatial);
      add_layer(out, p + "hfp.fuse", lw.hfp->fuse);
    }
    if (lw.sdp) {
      add_layer(out, p + "sdp.q", lw.sdp->q_conv);
      add_layer(out, p + "sdp.k", lw.sdp->k_conv);
      add_layer(out, p + "sdp.v", lw.sdp->v_conv);
    }
    add_layer(out, p + "output", lw.output);
  }
  return out;
}

std::vector<std::pair<std::string, Tensor*>> PyramidWeights::named_tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (auto& [name, tensor] : std::as_const(*this).named_tensors()) {
    out.emplace_back(name, const_cast<Tensor*>(tensor));
  }
  return out;
}

std::size_t PyramidWeights::param_count() const {
  std::size_t total = 0;
  for (const auto& [name, tensor] : named_tensors()) total += tensor->size();
  return total;
}

PyramidWeights init_weights(const PyramidConfig& config) {
  config.validate();
  PyramidWeights weights;
  weights.config = config;
  const std::size_t C = config.channels;
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    LevelWeights& lw = weights.at(level);
    {
      Rng rng(stream_seed(config.seed, level, kLateral));
      lw.lateral = make_conv_layer(
          {config.in_channels[slot(level)], C, 1, 1, config.conv_bias}, rng);
    }
    if (config.hfp_enabled()) {
      Rng rng(stream_seed(config.seed, level, kHfp));
      HfpParams hfp = make_hfp_params(
          {C, config.k, config.cp_groups, config.conv_bias, config.filter()},
          rng);
      hfp.use_channel_path = config.channel_path;
      hfp.use_spatial_path = config.spatial_path;
      hfp.squash_masks = config.squash_masks;
      lw.hfp = std::move(hfp);
    }
    if (config.sdp_enabled() && level < kMaxLevel) {
      Rng rng(stream_seed(config.seed, level, kSdp));
      lw.sdp = make_sdp_params({C, 1, 1, config.sdp_bias}, rng);
    }
    {
      Rng rng(stream_seed(config.seed, level, kOutput));
      lw.output = make_conv_layer({C, C, 3, 1, config.conv_bias}, rng);
    }
  }
  return weights;
}

FeaturePyramid build_laterals(const FeaturePyramid& backbone,
                              const PyramidWeights& weights) {
  backbone.validate_nesting();
  FeaturePyramid out;
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const ConvLayer& lateral = weights.at(level).lateral;
    if (backbone.at(level).c() != lateral.spec.in_channels) {
      throw ShapeError(level_prefix(level) + "backbone feature has " +
                       std::to_string(backbone.at(level).c()) +
                       " channels, lateral expects " +
                       std::to_string(lateral.spec.in_channels));
    }
    out.at(level) = lateral(backbone.at(level));
  }
  return out;
}

FeaturePyramid hsfpn_forward(const FeaturePyramid& laterals,
                             const PyramidWeights& weights,
                             ForwardTrace* trace) {
  const PyramidConfig& config = weights.config;
  config.validate();
  laterals.validate(config.channels);
  const std::size_t block_h = laterals.at(kMaxLevel).h();
  const std::size_t block_w = laterals.at(kMaxLevel).w();

  FeaturePyramid out;
  for (int level = kMaxLevel; level >= kMinLevel; --level) {
    const LevelWeights& lw = weights.at(level);
    const Tensor& c = laterals.at(level);
    Tensor fused;
    try {
      if (config.mode == PyramidMode::kFpnBaseline) {
        StageTimer timer(trace, "fusion");
        fused = level == kMaxLevel ? c : add(c, upsample2x(out.at(level + 1)));
      } else {
        Tensor h;
        {
          StageTimer timer(trace, "hfp");
          if (!lw.hfp) {
            h = c;
          } else if (lw.hfp->k <= std::min(c.h(), c.w())) {
            h = hfp_forward(c, *lw.hfp, level);
          } else {
            // Levels smaller than the pooling grid pool to their own extent.
            HfpParams clamped = *lw.hfp;
            clamped.k = std::min(c.h(), c.w());
            h = hfp_forward(c, clamped, level);
          }
        }
        if (level == kMaxLevel) {
          fused = std::move(h);
        } else if (lw.sdp) {
          const Tensor& upper = out.at(level + 1);
          {
            StageTimer timer(trace, "sdp");
            SdpParams sdp = *lw.sdp;
            sdp.block_h = block_h;
            sdp.block_w = block_w;
            fused = sdp_forward(h, upper, sdp);
          }
          if (config.fusion == FusionMode::kSdpPlusAdd) {
            StageTimer timer(trace, "fusion");
            fused = add(fused, upsample2x(upper));
          }
        } else {
          StageTimer timer(trace, "fusion");
          fused = add(h, upsample2x(out.at(level + 1)));
        }
      }
      StageTimer timer(trace, "output");
      out.at(level) = lw.output(fused);
    } catch (const ShapeError& e) {
      throw ShapeError(level_prefix(level) + e.what());
    }
    if (trace) trace->fused[slot(level)] = std::move(fused);
  }
  return out;
}

FeaturePyramid random_pyramid(
    std::size_t batch, const std::array<std::size_t, kNumLevels>& channels,
    std::size_t base_h, std::size_t base_w, std::uint64_t seed) {
  if (batch == 0 || base_h == 0 || base_w == 0 || base_h % 8 != 0 ||
      base_w % 8 != 0) {
    throw ShapeError("random_pyramid: level-2 extents " +
                     std::to_string(base_h) + "x" + std::to_string(base_w) +
                     " must be positive multiples of 8");
  }
  FeaturePyramid pyr;
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const std::size_t shift = slot(level);
    Rng rng(stream_seed(seed, level, 15));
    pyr.at(level) = random_tensor(
        {batch, channels[shift], base_h >> shift, base_w >> shift}, rng);
  }
  return pyr;
}

}  // namespace hsfpn
