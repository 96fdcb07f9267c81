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

#include "hsfpn/tensor_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hsfpn/errors.h"

namespace hsfpn {
namespace {

constexpr char kMagic[4] = {'P', 'F', 'T', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  if (at + 4 > bytes.size()) throw ParseError("PFT1: truncated header", at);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_pft(const Tensor& t) {
  if (t.empty()) throw ShapeError("PFT1: cannot encode an empty tensor");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, std::uint32_t(t.rank()));
  for (std::size_t d : t.dims()) put_u32(out, std::uint32_t(d));
  out.reserve(out.size() + 4 * t.size());
  for (float v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Tensor decode_pft(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("PFT1: bad magic", 0);
  }
  const std::uint32_t rank = get_u32(bytes, 4);
  if (rank < 1 || rank > 4) {
    throw ParseError("PFT1: rank " + std::to_string(rank) + " not in 1..4", 4);
  }
  Tensor::Dims dims;
  std::size_t volume = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::size_t at = 8 + 4 * i;
    const std::uint32_t d = get_u32(bytes, at);
    if (d == 0) throw ParseError("PFT1: zero extent", at);
    dims.push_back(d);
    volume *= d;
  }
  const std::size_t header = 8 + 4 * std::size_t(rank);
  const std::size_t expected = header + 4 * volume;
  if (bytes.size() != expected) {
    throw ParseError("PFT1: payload is " + std::to_string(bytes.size()) +
                         " bytes, extents require " + std::to_string(expected),
                     std::min(bytes.size(), expected));
  }
  std::vector<float> data(volume);
  for (std::size_t i = 0; i < volume; ++i) {
    const std::size_t at = header + 4 * i;
    data[i] = std::bit_cast<float>(get_u32(bytes, at));
    if (!std::isfinite(data[i])) throw ParseError("PFT1: non-finite value", at);
  }
  return Tensor(std::move(dims), std::move(data));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

void write_pft(const std::filesystem::path& path, const Tensor& t) {
  write_file_bytes(path, encode_pft(t));
}

Tensor read_pft(const std::filesystem::path& path) {
  return decode_pft(read_file_bytes(path));
}

}  // namespace hsfpn
