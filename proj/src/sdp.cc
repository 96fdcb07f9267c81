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

#include "hsfpn/sdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hsfpn/errors.h"
#include "hsfpn/hfp.h"

namespace hsfpn {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ValidationError("attention cost overflows 64 bits");
  }
  return out;
}

std::uint64_t product(std::initializer_list<std::uint64_t> factors) {
  std::uint64_t out = 1;
  for (std::uint64_t f : factors) out = checked_mul(out, f);
  return out;
}

void require_projection(const ConvLayer& layer, std::size_t c,
                        const char* name) {
  if (layer.spec.kernel != 1 || layer.spec.in_channels != c ||
      layer.spec.out_channels != c) {
    throw ShapeError(std::string("sdp: ") + name +
                     " projection must be a 1x1 conv C -> C");
  }
}

}  // namespace

void SdpParams::validate() const {
  const std::size_t c = channels();
  require_projection(q_conv, c, "query");
  require_projection(k_conv, c, "key");
  require_projection(v_conv, c, "value");
  if (block_h == 0 || block_w == 0) {
    throw ShapeError("sdp: block extents must be positive");
  }
}

SdpParams make_sdp_params(const SdpOptions& o, Rng& rng) {
  const ConvSpec spec{o.channels, o.channels, 1, 1, o.bias};
  SdpParams p;
  p.q_conv = make_conv_layer(spec, rng);
  p.k_conv = make_conv_layer(spec, rng);
  p.v_conv = make_conv_layer(spec, rng);
  p.block_h = o.block_h;
  p.block_w = o.block_w;
  return p;
}

BlockSet partition_blocks(const Tensor& x, std::size_t block_h,
                          std::size_t block_w) {
  x.require_rank(4, "partition_blocks input");
  if (block_h == 0 || block_w == 0 || x.h() % block_h != 0 ||
      x.w() % block_w != 0) {
    throw ShapeError("partition_blocks: " + std::to_string(block_h) + "x" +
                     std::to_string(block_w) + " blocks do not tile " +
                     std::to_string(x.h()) + "x" + std::to_string(x.w()));
  }
  BlockSet set{x.n(), x.h() / block_h, x.w() / block_w, block_h, block_w, x.c(),
               {}};
  set.blocks.reserve(set.batch * set.blocks_per_sample());
  const std::size_t C = x.c();
  for (std::size_t n = 0; n < set.batch; ++n) {
    for (std::size_t by = 0; by < set.grid_rows; ++by) {
      for (std::size_t bx = 0; bx < set.grid_cols; ++bx) {
        Tensor block({block_h * block_w, C});
        for (std::size_t c = 0; c < C; ++c) {
          for (std::size_t y = 0; y < block_h; ++y) {
            for (std::size_t xx = 0; xx < block_w; ++xx) {
              block.at(y * block_w + xx, c) =
                  x.at(n, c, by * block_h + y, bx * block_w + xx);
            }
          }
        }
        set.blocks.push_back(std::move(block));
      }
    }
  }
  return set;
}

Tensor reassemble_blocks(const BlockSet& set, const Tensor::Dims& dims) {
  if (dims.size() != 4 || dims[0] != set.batch || dims[1] != set.channels ||
      dims[2] != set.grid_rows * set.block_h ||
      dims[3] != set.grid_cols * set.block_w) {
    throw ShapeError("reassemble_blocks: dims " + dims_to_string(dims) +
                     " do not match the block grid");
  }
  if (set.blocks.size() != set.batch * set.blocks_per_sample()) {
    throw ShapeError("reassemble_blocks: expected " +
                     std::to_string(set.batch * set.blocks_per_sample()) +
                     " blocks, got " + std::to_string(set.blocks.size()));
  }
  const Tensor::Dims block_dims{set.block_h * set.block_w, set.channels};
  Tensor out(dims);
  std::size_t index = 0;
  for (std::size_t n = 0; n < set.batch; ++n) {
    for (std::size_t by = 0; by < set.grid_rows; ++by) {
      for (std::size_t bx = 0; bx < set.grid_cols; ++bx) {
        const Tensor& block = set.blocks[index++];
        if (block.dims() != block_dims) {
          throw ShapeError("reassemble_blocks: block " +
                           std::to_string(index - 1) + " has dims " +
                           dims_to_string(block.dims()));
        }
        for (std::size_t c = 0; c < set.channels; ++c) {
          for (std::size_t y = 0; y < set.block_h; ++y) {
            for (std::size_t xx = 0; xx < set.block_w; ++xx) {
              out.at(n, c, by * set.block_h + y, bx * set.block_w + xx) =
                  block.at(y * set.block_w + xx, c);
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

void check_qk(const Tensor& q, const Tensor& k) {
  q.require_rank(2, "attention query");
  k.require_rank(2, "attention key");
  if (q.dims() != k.dims()) {
    throw ShapeError("attention: query " + dims_to_string(q.dims()) +
                     " vs key " + dims_to_string(k.dims()));
  }
}

// Softmax row r of q k^T / sqrt(C) in double. Logits of wide, large-valued
// features reach 1e6 and lose whole units when rounded to float, so nothing
// is rounded before the weights are final.
void weight_row(const Tensor& q, const Tensor& k, std::size_t r,
                std::vector<double>& row) {
  const std::size_t m = k.dim(0), c = k.dim(1);
  const double inv_sqrt_c = 1.0 / std::sqrt(double(c));
  const float* qr = q.data().data() + r * c;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const float* kr = k.data().data() + j * c;
    double acc = 0.0;
    for (std::size_t i = 0; i < c; ++i) acc += double(qr[i]) * kr[i];
    row[j] = acc * inv_sqrt_c;
    peak = std::max(peak, row[j]);
  }
  double total = 0.0;
  for (double& x : row) {
    x = std::exp(x - peak);
    total += x;
  }
  for (double& x : row) x /= total;
}

}  // namespace

Tensor attention_weights(const Tensor& q, const Tensor& k) {
  check_qk(q, k);
  const std::size_t m = k.dim(0);
  Tensor out({q.dim(0), m});
  std::vector<double> row(m);
  for (std::size_t r = 0; r < q.dim(0); ++r) {
    weight_row(q, k, r, row);
    for (std::size_t j = 0; j < m; ++j) out.at(r, j) = float(row[j]);
  }
  return out;
}

Tensor block_attention(const Tensor& q, const Tensor& k, const Tensor& v) {
  check_qk(q, k);
  if (v.dims() != k.dims()) {
    throw ShapeError("attention: value " + dims_to_string(v.dims()) +
                     " vs key " + dims_to_string(k.dims()));
  }
  const std::size_t m = k.dim(0), c = v.dim(1);
  Tensor out({q.dim(0), c});
  std::vector<double> row(m), acc(c);
  for (std::size_t r = 0; r < q.dim(0); ++r) {
    weight_row(q, k, r, row);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const float* vr = v.data().data() + j * c;
      for (std::size_t i = 0; i < c; ++i) acc[i] += row[j] * vr[i];
    }
    for (std::size_t i = 0; i < c; ++i) out.at(r, i) = float(acc[i]);
  }
  return out;
}

Tensor sdp_forward(const Tensor& c_low, const Tensor& p_up,
                   const SdpParams& params) {
  params.validate();
  c_low.require_rank(4, "sdp lower feature");
  p_up.require_rank(4, "sdp upper feature");
  if (p_up.n() != c_low.n() || p_up.c() != c_low.c() ||
      2 * p_up.h() != c_low.h() || 2 * p_up.w() != c_low.w()) {
    throw ShapeError("sdp: upper feature " + dims_to_string(p_up.dims()) +
                     " must have half the extents of " +
                     dims_to_string(c_low.dims()));
  }
  if (c_low.c() != params.channels()) {
    throw ShapeError("sdp: feature has " + std::to_string(c_low.c()) +
                     " channels, projections expect " +
                     std::to_string(params.channels()));
  }
  const Tensor up = upsample2x(p_up);
  const BlockSet q =
      partition_blocks(params.q_conv(c_low), params.block_h, params.block_w);
  const BlockSet k =
      partition_blocks(params.k_conv(up), params.block_h, params.block_w);
  const BlockSet v =
      partition_blocks(params.v_conv(up), params.block_h, params.block_w);
  BlockSet attended = q;
  for (std::size_t j = 0; j < q.blocks.size(); ++j) {
    attended.blocks[j] = block_attention(q.blocks[j], k.blocks[j], v.blocks[j]);
  }
  return add(c_low, reassemble_blocks(attended, c_low.dims()));
}

void CostModel::validate() const {
  if (n == 0 || h == 0 || w == 0 || c == 0) {
    throw ValidationError("cost model fields must be positive");
  }
}

std::string_view layout_name(AttentionLayout layout) {
  switch (layout) {
    case AttentionLayout::kVit:
      return "vit";
    case AttentionLayout::kSdp:
      return "sdp";
    case AttentionLayout::kGlobal:
      return "global";
  }
  return "?";
}

std::string_view layout_complexity(AttentionLayout layout) {
  switch (layout) {
    case AttentionLayout::kVit:
      return "O(n^2 hwc)";
    case AttentionLayout::kSdp:
      return "O(n (hw)^2 c)";
    case AttentionLayout::kGlobal:
      return "O((nhw)^2 c)";
  }
  return "?";
}

std::uint64_t attention_cost(const CostModel& m, AttentionLayout layout) {
  m.validate();
  switch (layout) {
    case AttentionLayout::kVit:
      return product({2, m.n, m.n, m.h, m.w, m.c});
    case AttentionLayout::kSdp:
      return product({2, m.n, m.h, m.w, m.h, m.w, m.c});
    case AttentionLayout::kGlobal:
      return product({2, m.n, m.h, m.w, m.n, m.h, m.w, m.c});
  }
  throw ValidationError("unknown attention layout");
}

Ratio attention_multiplier(const CostModel& model, AttentionLayout layout) {
  const std::uint64_t num = attention_cost(model, layout);
  const std::uint64_t den = attention_cost(model, AttentionLayout::kVit);
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace hsfpn
