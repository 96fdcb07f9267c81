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

#ifndef HSFPN_TENSOR_H_
#define HSFPN_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hsfpn {

// Dense float32 array of rank 1..4. Rank-4 tensors are NCHW; rank-2 tensors
// are row-major matrices (rows x cols) or single image planes (H x W).
//
// A default-constructed Tensor is empty (rank 0, no data) and only serves as
// a placeholder; every operation rejects it.
class Tensor {
 public:
  using Dims = std::vector<std::size_t>;

  Tensor() = default;
  explicit Tensor(Dims dims, float fill = 0.0f);
  Tensor(Dims dims, std::vector<float> data);

  static Tensor matrix(std::size_t rows, std::size_t cols, float fill = 0.0f) {
    return Tensor({rows, cols}, fill);
  }

  const Dims& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  float operator[](std::size_t i) const { return data_[i]; }
  float& operator[](std::size_t i) { return data_[i]; }

  // NCHW accessors; valid for rank-4 tensors only.
  std::size_t n() const { return dims_[0]; }
  std::size_t c() const { return dims_[1]; }
  std::size_t h() const { return dims_[2]; }
  std::size_t w() const { return dims_[3]; }
  std::size_t plane_size() const { return dims_[2] * dims_[3]; }

  float at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
    return data_[((n * dims_[1] + c) * dims_[2] + y) * dims_[3] + x];
  }
  float& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
    return data_[((n * dims_[1] + c) * dims_[2] + y) * dims_[3] + x];
  }

  // Row-major accessors; valid for rank-2 tensors only.
  float at(std::size_t r, std::size_t c) const {
    return data_[r * dims_[1] + c];
  }
  float& at(std::size_t r, std::size_t c) { return data_[r * dims_[1] + c]; }

  // View of one (sample, channel) plane of a rank-4 tensor.
  std::span<const float> plane(std::size_t n, std::size_t c) const;
  std::span<float> plane(std::size_t n, std::size_t c);

  bool all_finite() const;

  // Throws ShapeError unless this tensor has exactly `rank` dimensions.
  void require_rank(std::size_t rank, const char* what) const;

  // Element-wise equality of dims and values (0.0f == -0.0f).
  bool operator==(const Tensor& other) const = default;

 private:
  Dims dims_;
  std::vector<float> data_;
};

std::string dims_to_string(const Tensor::Dims& dims);

// True when both tensors have the same dims and identical bit patterns.
bool bitwise_equal(const Tensor& a, const Tensor& b);

// Largest absolute element-wise difference; dims must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

double l2_norm(const Tensor& x);

}  // namespace hsfpn

#endif  // HSFPN_TENSOR_H_
