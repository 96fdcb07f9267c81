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

#ifndef HSFPN_SCENE_H_
#define HSFPN_SCENE_H_

#include <cstddef>

#include "hsfpn/tensor.h"

namespace hsfpn {

// Synthetic tiny-target scene: a flat background, an isotropic Gaussian blob
// centred at (size/2, size/2) and a diagonal linear ramp rising from 0 at the
// top-left corner to `ramp` at the bottom-right corner.
//
//   I(y, x) = background + amplitude * exp(-((y-c)^2 + (x-c)^2) / (2 s^2))
//             + ramp * (x + y) / (2 (size - 1))
struct BlobScene {
  std::size_t size = 100;
  double background = 0.2;
  double amplitude = 0.6;
  double sigma = 2.0;
  double ramp = 0.5;

  std::size_t center() const { return size / 2; }
};

// Renders the scene as a size x size rank-2 tensor.
Tensor render_scene(const BlobScene& scene);

}  // namespace hsfpn

#endif  // HSFPN_SCENE_H_
