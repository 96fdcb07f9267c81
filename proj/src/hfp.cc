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

#include "hsfpn/hfp.h"

#include <cmath>
#include <string>

#include "hsfpn/errors.h"

namespace hsfpn {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError("hfp: " + what);
}

}  // namespace

void HfpParams::validate() const {
  const std::size_t c = channels();
  require(k >= 1, "pooling extent k must be >= 1");
  require(fuse.spec.kernel == 3 && fuse.spec.out_channels == c,
          "fuse conv must be 3x3 and preserve channels");
  require(spatial.spec.in_channels == c && spatial.spec.out_channels == 1,
          "spatial conv must map C channels to 1");
  require(cp_avg.spec.in_channels == c && cp_avg.spec.out_channels == c,
          "average-branch conv must map C -> C");
  require(cp_max.spec.in_channels == c && cp_max.spec.out_channels == c,
          "max-branch conv must map C -> C");
  require(cp_merge.spec.in_channels == 2 * c && cp_merge.spec.out_channels == c,
          "merge conv must map 2C -> C");
  filter.validate();
}

ConvLayer make_conv_layer(const ConvSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t fan_in =
      (spec.in_channels / spec.groups) * spec.kernel * spec.kernel;
  const float bound = float(std::sqrt(3.0 / double(fan_in)));
  ConvLayer layer{spec, random_tensor(spec.weight_dims(), rng, -bound, bound),
                  std::nullopt};
  if (spec.has_bias) {
    layer.bias = random_tensor({spec.out_channels}, rng, -bound, bound);
  }
  return layer;
}

HfpParams make_hfp_params(const HfpOptions& o, Rng& rng) {
  const std::size_t c = o.channels;
  HfpParams p;
  p.k = o.k;
  p.filter = o.filter;
  p.cp_avg = make_conv_layer({c, c, 1, o.groups, o.bias}, rng);
  p.cp_max = make_conv_layer({c, c, 1, o.groups, o.bias}, rng);
  p.cp_merge = make_conv_layer({2 * c, c, 1, o.groups, o.bias}, rng);
  p.spatial = make_conv_layer({c, 1, 1, 1, o.bias}, rng);
  p.fuse = make_conv_layer({c, c, 3, 1, o.bias}, rng);
  p.validate();
  return p;
}

Tensor channel_path(const Tensor& f, const HfpParams& params) {
  f.require_rank(4, "channel_path input");
  if (f.h() < params.k || f.w() < params.k) {
    throw ShapeError("channel_path: feature " + std::to_string(f.h()) + "x" +
                     std::to_string(f.w()) +
                     " is smaller than k=" + std::to_string(params.k));
  }
  const Tensor avg =
      sum_planes(relu(adaptive_pool(f, params.k, params.k, PoolMode::kAvg)));
  const Tensor max =
      sum_planes(relu(adaptive_pool(f, params.k, params.k, PoolMode::kMax)));
  Tensor u =
      params.cp_merge(concat_channels(params.cp_avg(avg), params.cp_max(max)));
  return params.squash_masks ? sigmoid(u) : u;
}

Tensor spatial_path(const Tensor& f, const HfpParams& params) {
  Tensor u = params.spatial(f);
  return params.squash_masks ? sigmoid(u) : u;
}

Tensor hfp_forward(const Tensor& c, const HfpParams& params, int level) {
  params.validate();
  c.require_rank(4, "hfp_forward input");
  const Tensor f = highfreq_response(c, params.filter, level);
  Tensor mixed(c.dims());
  if (params.use_channel_path) {
    mixed = add(mixed, scale_channels(c, channel_path(f, params)));
  }
  if (params.use_spatial_path) {
    mixed = add(mixed, scale_pixels(c, spatial_path(f, params)));
  }
  return params.fuse(mixed);
}

}  // namespace hsfpn
