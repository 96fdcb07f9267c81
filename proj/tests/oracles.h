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

// Straight-line reference implementations used only by the tests. None of
// them calls into the library's compute paths; they share the Tensor and
// parameter containers and nothing else.

#ifndef HSFPN_TESTS_ORACLES_H_
#define HSFPN_TESTS_ORACLES_H_

#include <optional>
#include <vector>

#include "hsfpn/hfp.h"
#include "hsfpn/ops.h"
#include "hsfpn/pyramid.h"
#include "hsfpn/sdp.h"
#include "hsfpn/tensor.h"

namespace hsfpn::oracle {

// Per-output-element dot product with explicit bounds checks.
Tensor conv2d(const Tensor& x, const ConvLayer& layer);

// Enumerates every pooling window explicitly.
Tensor adaptive_pool(const Tensor& x, std::size_t out_h, std::size_t out_w,
                     PoolMode mode);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor upsample2x(const Tensor& x);

// Direct double sums over cosines, O(H^2 W^2) per plane.
Tensor dct2(const Tensor& x);
Tensor idct2(const Tensor& x);

// High-pass mask rule evaluated point by point.
bool mask_passes(std::size_t u, std::size_t v, std::size_t h, std::size_t w,
                 double alpha);

Tensor highfreq(const Tensor& c, const FilterSpec& spec, int level);

Tensor channel_path(const Tensor& f, const HfpParams& params);
Tensor spatial_path(const Tensor& f, const HfpParams& params);
Tensor hfp(const Tensor& c, const HfpParams& params, int level);

// Explicit exponentials, one query row at a time.
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v);
Tensor attention_weights(const Tensor& q, const Tensor& k);

// Project, cut into tiles by index arithmetic, attend, add.
Tensor sdp(const Tensor& c_low, const Tensor& p_up, const SdpParams& params);

// Classic top-down FPN over the lateral pyramid.
FeaturePyramid fpn(const FeaturePyramid& laterals,
                   const PyramidWeights& weights);

// End-to-end composition of the module oracles.
FeaturePyramid hsfpn(const FeaturePyramid& laterals,
                     const PyramidWeights& weights,
                     std::array<Tensor, kNumLevels>* fused = nullptr);

}  // namespace hsfpn::oracle

#endif  // HSFPN_TESTS_ORACLES_H_
