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

#ifndef HSFPN_OPS_H_
#define HSFPN_OPS_H_

#include <cstddef>
#include <optional>

#include "hsfpn/tensor.h"

namespace hsfpn {

// Geometry of a stride-1 square convolution. Kernel 3 pads by one pixel on
// every side, kernel 1 does not pad, so spatial extents are always preserved.
struct ConvSpec {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel = 1;
  std::size_t groups = 1;
  bool has_bias = true;

  void validate() const;
  std::size_t weight_count() const {
    return out_channels * (in_channels / groups) * kernel * kernel;
  }
  Tensor::Dims weight_dims() const {
    return {out_channels, in_channels / groups, kernel, kernel};
  }
  std::size_t param_count() const {
    return weight_count() + (has_bias ? out_channels : 0);
  }
};

// Direct stride-1 convolution, accumulated in double.
Tensor conv2d(const Tensor& x, const ConvSpec& spec, const Tensor& weights,
              const std::optional<Tensor>& bias);

// A convolution together with its parameters.
struct ConvLayer {
  ConvSpec spec;
  Tensor weight;
  std::optional<Tensor> bias;

  Tensor operator()(const Tensor& x) const {
    return conv2d(x, spec, weight, bias);
  }
  std::size_t param_count() const {
    return weight.size() + (bias ? bias->size() : 0);
  }
};

enum class PoolMode { kAvg, kMax };

// Adaptive pooling: output index o covers input rows
// floor(o*H/out_h) .. ceil((o+1)*H/out_h)-1, likewise for columns.
Tensor adaptive_pool(const Tensor& x, std::size_t out_h, std::size_t out_w,
                     PoolMode mode);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);

// Row-wise softmax of a rank-2 tensor with max subtraction.
Tensor softmax_rows(const Tensor& m);

// Nearest-neighbour 2x upsampling of a rank-4 tensor.
Tensor upsample2x(const Tensor& x);

// (r x s) * (s x t) with double accumulation.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& m);

Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, float s);

// x * u where u is (N,C,1,1), broadcast over H and W.
Tensor scale_channels(const Tensor& x, const Tensor& u);

// x * u where u is (N,1,H,W), broadcast over C.
Tensor scale_pixels(const Tensor& x, const Tensor& u);

// Concatenates two rank-4 tensors along C, `a` first.
Tensor concat_channels(const Tensor& a, const Tensor& b);

// Sums each (sample, channel) plane; result is (N,C,1,1).
Tensor sum_planes(const Tensor& x);

}  // namespace hsfpn

#endif  // HSFPN_OPS_H_
