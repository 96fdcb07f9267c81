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

#include "hsfpn/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "hsfpn/errors.h"

namespace hsfpn {
namespace {

std::size_t checked_volume(const Tensor::Dims& dims) {
  if (dims.empty() || dims.size() > 4) {
    throw ShapeError("tensor rank must be 1..4, got " +
                     std::to_string(dims.size()));
  }
  for (std::size_t d : dims) {
    if (d == 0) throw ShapeError("tensor extents must be >= 1");
  }
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

}  // namespace

Tensor::Tensor(Dims dims, float fill)
    : dims_(std::move(dims)), data_(checked_volume(dims_), fill) {}

Tensor::Tensor(Dims dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (checked_volume(dims_) != data_.size()) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match dims " + dims_to_string(dims_));
  }
}

std::span<const float> Tensor::plane(std::size_t n, std::size_t c) const {
  const std::size_t hw = plane_size();
  return std::span<const float>(data_).subspan((n * dims_[1] + c) * hw, hw);
}

std::span<float> Tensor::plane(std::size_t n, std::size_t c) {
  const std::size_t hw = plane_size();
  return std::span<float>(data_).subspan((n * dims_[1] + c) * hw, hw);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

void Tensor::require_rank(std::size_t rank, const char* what) const {
  if (dims_.size() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " +
                     std::to_string(rank) + ", got dims " +
                     dims_to_string(dims_));
  }
}

std::string dims_to_string(const Tensor::Dims& dims) {
  std::string out = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(dims[i]);
  }
  return out + "]";
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  if (a.dims() != b.dims()) return false;
  return a.empty() || std::memcmp(a.data().data(), b.data().data(),
                                  a.size() * sizeof(float)) == 0;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.dims() != b.dims()) {
    throw ShapeError("max_abs_diff: dims " + dims_to_string(a.dims()) + " vs " +
                     dims_to_string(b.dims()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(double(a[i]) - double(b[i])));
  }
  return worst;
}

double l2_norm(const Tensor& x) {
  double acc = 0.0;
  for (float v : x.data()) acc += double(v) * double(v);
  return std::sqrt(acc);
}

}  // namespace hsfpn
