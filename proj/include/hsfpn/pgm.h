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

#ifndef HSFPN_PGM_H_
#define HSFPN_PGM_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hsfpn/tensor.h"

namespace hsfpn {

// Decodes a binary 8-bit PGM (P5, maxval 1..255) into an H x W tensor with
// values sample/maxval in [0, 1]. Malformed input raises ParseError with the
// byte offset of the problem.
Tensor decode_pgm(std::span<const std::uint8_t> bytes);
Tensor read_pgm(const std::filesystem::path& path);

// Encodes an H x W tensor as P5 with maxval 255. Values are shifted by
// `offset`, clamped to [0, 1] and rounded to the nearest level.
std::vector<std::uint8_t> encode_pgm(const Tensor& image, float offset = 0.0f);
void write_pgm(const std::filesystem::path& path, const Tensor& image,
               float offset = 0.0f);

}  // namespace hsfpn

#endif  // HSFPN_PGM_H_
