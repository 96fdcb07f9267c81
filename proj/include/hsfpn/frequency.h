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

#ifndef HSFPN_FREQUENCY_H_
#define HSFPN_FREQUENCY_H_

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "hsfpn/tensor.h"

namespace hsfpn {

inline constexpr int kMinLevel = 2;
inline constexpr int kMaxLevel = 5;
inline constexpr std::size_t kNumLevels = kMaxLevel - kMinLevel + 1;

// Throws ValidationError unless 2 <= level <= 5.
void check_level(int level);

// Orthonormal DCT-II basis of size n, row-major: row k is basis function k.
std::vector<double> dct_matrix(std::size_t n);

// Orthonormal 2D DCT-II applied to every plane. Accepts a rank-2 plane or a
// rank-4 NCHW tensor.
Tensor dct2(const Tensor& x);

// Inverse of dct2 (orthonormal DCT-III along both axes).
Tensor idct2(const Tensor& x);

// h x w binary mask: 0 where u < alpha*h and v < alpha*w, 1 elsewhere.
// Thresholds are compared as reals (alpha=0.25, h=10 zeroes rows 0..2).
Tensor highpass_mask(std::size_t h, std::size_t w, double alpha);

// h x w binary mask zeroing the absolute top-left cut_rows x cut_cols
// coefficient block. Cuts larger than the plane are clipped.
Tensor region_mask(std::size_t h, std::size_t w, std::size_t cut_rows,
                   std::size_t cut_cols);

// idct2(mask * dct2(plane)) for every plane of x. The mask is h x w.
Tensor apply_spectral_mask(const Tensor& x, const Tensor& mask);

// High-pass filter configuration for the pyramid levels. By default the
// filter only runs on levels 2 and 3.
struct FilterSpec {
  double alpha = 0.25;
  std::array<bool, kNumLevels> enabled = {true, true, false, false};

  void validate() const;
  bool enabled_at(int level) const;
  void set_enabled(int level, bool on);
};

// High-frequency response of c at `level`: c itself when the level is
// disabled, otherwise the per-plane high-pass filtered tensor.
Tensor highfreq_response(const Tensor& c, const FilterSpec& spec, int level);

// Target and neighbourhood windows for the signal-to-clutter ratio. Both are
// square, share the target centre and are clipped to the image. A window of
// extent e centred at r spans rows [r - e/2, r - e/2 + e).
struct ScrWindows {
  std::size_t target_row = 0;
  std::size_t target_col = 0;
  std::size_t target_extent = 40;
  std::size_t neighborhood_extent = 80;

  void validate() const;
};

// |mu_t - mu_b| / sigma_b over a rank-2 image. The background is the
// neighbourhood window minus the target window; sigma_b is the population
// standard deviation. Throws DegenerateError when sigma_b < 1e-9.
double scr(const Tensor& image, const ScrWindows& windows);

struct ScrSweepRow {
  std::size_t cut_rows = 0;
  std::size_t cut_cols = 0;
  // Empty when the filtered background is constant.
  std::optional<double> scr;
};

// SCR of the image after removing each top-left coefficient block in
// `cuts`, in the given order.
std::vector<ScrSweepRow> scr_sweep(
    const Tensor& image, const ScrWindows& windows,
    const std::vector<std::pair<std::size_t, std::size_t>>& cuts);

// Square cuts 0, step, 2*step, ... up to and including `max_cut`.
std::vector<std::pair<std::size_t, std::size_t>> square_cut_grid(
    std::size_t max_cut, std::size_t step);

}  // namespace hsfpn

#endif  // HSFPN_FREQUENCY_H_
