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

#include "hsfpn/pgm.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "hsfpn/errors.h"
#include "hsfpn/tensor_io.h"

namespace hsfpn {
namespace {

class HeaderReader {
 public:
  HeaderReader(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t pos() const { return pos_; }

  // Skips whitespace and '#' comments.
  void skip_blank() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_blank();
    const std::size_t start = pos_;
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + std::size_t(bytes_[pos_] - '0');
      if (v > 1'000'000) {
        throw ParseError(std::string("PGM: ") + what + " too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(std::string("PGM: expected ") + what, start);
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void raster_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("PGM: missing whitespace before raster", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

Tensor decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("PGM: expected magic P5", 0);
  }
  HeaderReader reader(bytes, 2);
  const std::size_t width = reader.number("width");
  const std::size_t height = reader.number("height");
  reader.skip_blank();
  const std::size_t maxval_at = reader.pos();
  const std::size_t maxval = reader.number("maxval");
  if (width == 0 || height == 0) {
    throw ParseError("PGM: zero image extent", 2);
  }
  if (maxval == 0 || maxval > 255) {
    throw ParseError("PGM: only 8-bit maxval (1..255) is supported", maxval_at);
  }
  reader.raster_separator();
  const std::size_t raster = reader.pos();
  const std::size_t expected = width * height;
  if (bytes.size() - raster != expected) {
    throw ParseError("PGM: raster has " +
                         std::to_string(bytes.size() - raster) +
                         " bytes, expected " + std::to_string(expected),
                     raster);
  }
  Tensor image({height, width});
  for (std::size_t i = 0; i < expected; ++i) {
    const std::uint8_t v = bytes[raster + i];
    if (v > maxval) {
      throw ParseError("PGM: sample exceeds maxval", raster + i);
    }
    image[i] = float(v) / float(maxval);
  }
  return image;
}

Tensor read_pgm(const std::filesystem::path& path) {
  return decode_pgm(read_file_bytes(path));
}

std::vector<std::uint8_t> encode_pgm(const Tensor& image, float offset) {
  image.require_rank(2, "encode_pgm image");
  const std::string header = "P5\n" + std::to_string(image.dim(1)) + " " +
                             std::to_string(image.dim(0)) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.size());
  for (float v : image.data()) {
    const float clamped = std::clamp(v + offset, 0.0f, 1.0f);
    out.push_back(std::uint8_t(std::lround(clamped * 255.0f)));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Tensor& image,
               float offset) {
  write_file_bytes(path, encode_pgm(image, offset));
}

}  // namespace hsfpn
