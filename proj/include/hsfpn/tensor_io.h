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

#ifndef HSFPN_TENSOR_IO_H_
#define HSFPN_TENSOR_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hsfpn/tensor.h"

namespace hsfpn {

// PFT1 tensor files:
//   bytes 0..3   magic "PFT1"
//   u32 LE       rank (1..4)
//   rank x u32   extents, LE
//   f32 LE       data in layout order, exactly product(extents) values
//
// Decoding rejects a wrong magic, zero extents, short or trailing data and
// non-finite values with a ParseError naming the byte offset.
std::vector<std::uint8_t> encode_pft(const Tensor& t);
Tensor decode_pft(std::span<const std::uint8_t> bytes);

void write_pft(const std::filesystem::path& path, const Tensor& t);
Tensor read_pft(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace hsfpn

#endif  // HSFPN_TENSOR_IO_H_
