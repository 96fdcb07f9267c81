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

#include "hsfpn/random.h"

namespace hsfpn {

Tensor random_tensor(Tensor::Dims dims, Rng& rng, float lo, float hi) {
  Tensor out(std::move(dims));
  for (float& v : out.data()) v = float(rng.uniform(lo, hi));
  return out;
}

}  // namespace hsfpn
