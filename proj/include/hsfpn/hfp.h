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

#ifndef HSFPN_HFP_H_
#define HSFPN_HFP_H_

#include <cstddef>

#include "hsfpn/frequency.h"
#include "hsfpn/ops.h"
#include "hsfpn/random.h"
#include "hsfpn/tensor.h"

namespace hsfpn {

// Weights and settings of one high frequency perception block.
//
// Channel path: the high-frequency response is adaptively average- and
// max-pooled to k x k, rectified, summed per channel, and each of the two
// length-C vectors passes its own grouped 1x1 conv (C -> C). The results are
// concatenated (average branch first) and merged by a grouped 1x1 conv
// 2C -> C into the channel weights u_cp (N,C,1,1).
//
// Spatial path: a 1x1 conv C -> 1 over the response gives u_sp (N,1,H,W).
//
// The block output is fuse(u_cp * c + u_sp * c) with `fuse` a 3x3 conv.
struct HfpParams {
  std::size_t k = 16;
  ConvLayer cp_avg;
  ConvLayer cp_max;
  ConvLayer cp_merge;
  ConvLayer spatial;
  ConvLayer fuse;
  FilterSpec filter;

  // Either path may be switched off; a disabled path contributes nothing
  // to the fused sum.
  bool use_channel_path = true;
  bool use_spatial_path = true;

  // Passes u_cp and u_sp through a sigmoid. Off by default.
  bool squash_masks = false;

  std::size_t channels() const { return fuse.spec.in_channels; }

  // Checks channel agreement between the layers.
  void validate() const;
};

struct HfpOptions {
  std::size_t channels = 256;
  std::size_t k = 16;
  std::size_t groups = 16;
  bool bias = true;
  FilterSpec filter;
};

// Builds an HfpParams with fan-in scaled uniform weights drawn from `rng`.
HfpParams make_hfp_params(const HfpOptions& options, Rng& rng);

// u_cp for the high-frequency response f. Throws ShapeError when f is
// smaller than k x k.
Tensor channel_path(const Tensor& f, const HfpParams& params);

// u_sp for the high-frequency response f.
Tensor spatial_path(const Tensor& f, const HfpParams& params);

// Full block on the lateral feature c of pyramid `level`.
Tensor hfp_forward(const Tensor& c, const HfpParams& params, int level);

// Fan-in scaled initialisation shared by every learned layer: weights and
// biases are drawn from U(-sqrt(3/fan_in), sqrt(3/fan_in)).
ConvLayer make_conv_layer(const ConvSpec& spec, Rng& rng);

}  // namespace hsfpn

#endif  // HSFPN_HFP_H_
