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

#include "hsfpn/scene.h"

#include <cmath>

#include "hsfpn/errors.h"

namespace hsfpn {

Tensor render_scene(const BlobScene& scene) {
  if (scene.size < 2 || !(scene.sigma > 0.0)) {
    throw ValidationError("scene needs size >= 2 and sigma > 0");
  }
  const double c = double(scene.center());
  const double denom = 2.0 * double(scene.size - 1);
  Tensor image({scene.size, scene.size});
  for (std::size_t y = 0; y < scene.size; ++y) {
    for (std::size_t x = 0; x < scene.size; ++x) {
      const double dy = double(y) - c, dx = double(x) - c;
      const double blob =
          scene.amplitude *
          std::exp(-(dy * dy + dx * dx) / (2.0 * scene.sigma * scene.sigma));
      image.at(y, x) =
          float(scene.background + blob + scene.ramp * double(x + y) / denom);
    }
  }
  return image;
}

}  // namespace hsfpn
