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

#ifndef HSFPN_SDP_H_
#define HSFPN_SDP_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hsfpn/ops.h"
#include "hsfpn/random.h"
#include "hsfpn/tensor.h"

namespace hsfpn {

// Projections and block geometry of one spatial dependency perception block.
// Queries come from the lower feature, keys and values from the upsampled
// upper feature. Attention runs independently inside each block_h x block_w
// tile.
struct SdpParams {
  ConvLayer q_conv;
  ConvLayer k_conv;
  ConvLayer v_conv;
  std::size_t block_h = 1;
  std::size_t block_w = 1;

  std::size_t channels() const { return q_conv.spec.in_channels; }
  void validate() const;
};

struct SdpOptions {
  std::size_t channels = 256;
  std::size_t block_h = 1;
  std::size_t block_w = 1;
  bool bias = false;
};

SdpParams make_sdp_params(const SdpOptions& options, Rng& rng);

// A feature map cut into tiles. blocks[(n * grid_rows + by) * grid_cols + bx]
// is the (block_h*block_w) x C matrix of tile (by, bx) of sample n; its rows
// are the tile's pixels in row-major order.
struct BlockSet {
  std::size_t batch = 0;
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::size_t block_h = 0;
  std::size_t block_w = 0;
  std::size_t channels = 0;
  std::vector<Tensor> blocks;

  std::size_t blocks_per_sample() const { return grid_rows * grid_cols; }
};

BlockSet partition_blocks(const Tensor& x, std::size_t block_h,
                          std::size_t block_w);

// Inverse of partition_blocks; `dims` are the NCHW dims of the original map.
Tensor reassemble_blocks(const BlockSet& blocks, const Tensor::Dims& dims);

// softmax(q k^T / sqrt(C)) for one tile, shape hw x hw.
Tensor attention_weights(const Tensor& q, const Tensor& k);

// attention_weights(q, k) * v.
Tensor block_attention(const Tensor& q, const Tensor& k, const Tensor& v);

// c_low + reassemble(block_attention per tile) with Q from c_low and K, V
// from upsample2x(p_up).
Tensor sdp_forward(const Tensor& c_low, const Tensor& p_up,
                   const SdpParams& params);

// Symbols of the attention cost comparison: n tiles of h x w pixels with c
// channels each.
struct CostModel {
  std::uint64_t n = 1;
  std::uint64_t h = 1;
  std::uint64_t w = 1;
  std::uint64_t c = 1;

  void validate() const;
};

enum class AttentionLayout { kVit, kSdp, kGlobal };

std::string_view layout_name(AttentionLayout layout);
std::string_view layout_complexity(AttentionLayout layout);

// Multiply-accumulates of one attention layout. Each count is twice the
// dominant term (similarity and value weighting):
//   vit:    2 * n^2 * h * w * c
//   sdp:    2 * n * (h*w)^2 * c
//   global: 2 * (n*h*w)^2 * c
// Throws ValidationError on 64-bit overflow.
std::uint64_t attention_cost(const CostModel& model, AttentionLayout layout);

// Exact ratio num/den, reduced.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  bool operator==(const Ratio&) const = default;
  double value() const { return double(num) / double(den); }
};

// attention_cost(model, layout) / attention_cost(model, kVit), reduced.
Ratio attention_multiplier(const CostModel& model, AttentionLayout layout);

}  // namespace hsfpn

#endif  // HSFPN_SDP_H_
