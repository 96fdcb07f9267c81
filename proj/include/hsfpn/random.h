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

#ifndef HSFPN_RANDOM_H_
#define HSFPN_RANDOM_H_

#include <cstdint>
#include <random>

#include "hsfpn/tensor.h"

namespace hsfpn {

// Seeded generator with a platform-independent uniform mapping: the raw
// mt19937_64 stream is standardized, and uniform() converts it without going
// through the implementation-defined std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1).
  double unit() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Index in [0, n).
  std::size_t below(std::size_t n) { return std::size_t(unit() * double(n)); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

Tensor random_tensor(Tensor::Dims dims, Rng& rng, float lo = -1.0f,
                     float hi = 1.0f);

}  // namespace hsfpn

#endif  // HSFPN_RANDOM_H_
