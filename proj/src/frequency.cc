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

#include "hsfpn/frequency.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hsfpn/errors.h"

namespace hsfpn {
namespace {

struct PlaneGeometry {
  std::size_t planes;
  std::size_t h;
  std::size_t w;
};

PlaneGeometry plane_geometry(const Tensor& x, const char* what) {
  if (x.rank() == 2) return {1, x.dim(0), x.dim(1)};
  if (x.rank() == 4) return {x.n() * x.c(), x.h(), x.w()};
  throw ShapeError(std::string(what) +
                   ": expected a rank-2 plane or NCHW "
                   "tensor, got " +
                   dims_to_string(x.dims()));
}

// out = rows * plane * cols^T when `inverse` is false, and
// out = rows^T * plane * cols otherwise, with rows/cols the DCT bases.
void transform_plane(std::span<const float> in, std::span<float> out,
                     const std::vector<double>& rows,
                     const std::vector<double>& cols, std::size_t h,
                     std::size_t w, bool inverse, std::vector<double>& tmp) {
  tmp.assign(h * w, 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    double* trow = &tmp[k * w];
    for (std::size_t y = 0; y < h; ++y) {
      const double b = inverse ? rows[y * h + k] : rows[k * h + y];
      const float* irow = &in[y * w];
      for (std::size_t x = 0; x < w; ++x) trow[x] += b * double(irow[x]);
    }
  }
  for (std::size_t k = 0; k < h; ++k) {
    const double* trow = &tmp[k * w];
    for (std::size_t l = 0; l < w; ++l) {
      double acc = 0.0;
      for (std::size_t x = 0; x < w; ++x) {
        acc += trow[x] * (inverse ? cols[x * w + l] : cols[l * w + x]);
      }
      out[k * w + l] = float(acc);
    }
  }
}

Tensor transform(const Tensor& x, bool inverse) {
  const auto g = plane_geometry(x, inverse ? "idct2" : "dct2");
  const auto rows = dct_matrix(g.h);
  const auto cols = dct_matrix(g.w);
  Tensor out(x.dims());
  std::vector<double> tmp;
  const std::size_t hw = g.h * g.w;
  for (std::size_t p = 0; p < g.planes; ++p) {
    transform_plane(x.data().subspan(p * hw, hw),
                    out.data().subspan(p * hw, hw), rows, cols, g.h, g.w,
                    inverse, tmp);
  }
  return out;
}

struct Window {
  std::size_t r0, r1, c0, c1;  // half-open, clipped

  bool contains(std::size_t r, std::size_t c) const {
    return r >= r0 && r < r1 && c >= c0 && c < c1;
  }
};

Window centered_window(std::size_t row, std::size_t col, std::size_t extent,
                       std::size_t h, std::size_t w) {
  auto clip = [](std::ptrdiff_t v, std::size_t hi) {
    return std::size_t(std::clamp<std::ptrdiff_t>(v, 0, std::ptrdiff_t(hi)));
  };
  const std::ptrdiff_t half = std::ptrdiff_t(extent / 2);
  const std::ptrdiff_t r0 = std::ptrdiff_t(row) - half;
  const std::ptrdiff_t c0 = std::ptrdiff_t(col) - half;
  return {clip(r0, h), clip(r0 + std::ptrdiff_t(extent), h), clip(c0, w),
          clip(c0 + std::ptrdiff_t(extent), w)};
}

}  // namespace

void check_level(int level) {
  if (level < kMinLevel || level > kMaxLevel) {
    throw ValidationError("pyramid level must be in 2..5, got " +
                          std::to_string(level));
  }
}

std::vector<double> dct_matrix(std::size_t n) {
  std::vector<double> m(n * n);
  const double s0 = std::sqrt(1.0 / double(n));
  const double s = std::sqrt(2.0 / double(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      m[k * n + i] =
          (k == 0 ? s0 : s) * std::cos(std::numbers::pi * double(2 * i + 1) *
                                       double(k) / double(2 * n));
    }
  }
  return m;
}

Tensor dct2(const Tensor& x) { return transform(x, false); }

Tensor idct2(const Tensor& x) { return transform(x, true); }

Tensor highpass_mask(std::size_t h, std::size_t w, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
  const double rows = alpha * double(h);
  const double cols = alpha * double(w);
  Tensor mask({h, w}, 1.0f);
  for (std::size_t u = 0; u < h && double(u) < rows; ++u) {
    for (std::size_t v = 0; v < w && double(v) < cols; ++v) {
      mask.at(u, v) = 0.0f;
    }
  }
  return mask;
}

Tensor region_mask(std::size_t h, std::size_t w, std::size_t cut_rows,
                   std::size_t cut_cols) {
  Tensor mask({h, w}, 1.0f);
  for (std::size_t u = 0; u < std::min(h, cut_rows); ++u) {
    for (std::size_t v = 0; v < std::min(w, cut_cols); ++v) {
      mask.at(u, v) = 0.0f;
    }
  }
  return mask;
}

Tensor apply_spectral_mask(const Tensor& x, const Tensor& mask) {
  const auto g = plane_geometry(x, "apply_spectral_mask");
  if (mask.dims() != Tensor::Dims{g.h, g.w}) {
    throw ShapeError("spectral mask " + dims_to_string(mask.dims()) +
                     " does not match planes of " + dims_to_string(x.dims()));
  }
  Tensor coeffs = dct2(x);
  const std::size_t hw = g.h * g.w;
  for (std::size_t p = 0; p < g.planes; ++p) {
    auto plane = coeffs.data().subspan(p * hw, hw);
    for (std::size_t i = 0; i < hw; ++i) plane[i] *= mask[i];
  }
  return idct2(coeffs);
}

void FilterSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
}

bool FilterSpec::enabled_at(int level) const {
  check_level(level);
  return enabled[std::size_t(level - kMinLevel)];
}

void FilterSpec::set_enabled(int level, bool on) {
  check_level(level);
  enabled[std::size_t(level - kMinLevel)] = on;
}

Tensor highfreq_response(const Tensor& c, const FilterSpec& spec, int level) {
  spec.validate();
  c.require_rank(4, "highfreq_response input");
  if (!spec.enabled_at(level)) return c;
  return apply_spectral_mask(c, highpass_mask(c.h(), c.w(), spec.alpha));
}

void ScrWindows::validate() const {
  if (target_extent == 0 || neighborhood_extent <= target_extent) {
    throw ValidationError(
        "SCR windows need neighborhood extent > target extent > 0");
  }
}

double scr(const Tensor& image, const ScrWindows& windows) {
  windows.validate();
  image.require_rank(2, "scr image");
  const std::size_t h = image.dim(0), w = image.dim(1);
  if (windows.target_row >= h || windows.target_col >= w) {
    throw ValidationError("SCR target centre lies outside the image");
  }
  const Window target = centered_window(windows.target_row, windows.target_col,
                                        windows.target_extent, h, w);
  const Window hood = centered_window(windows.target_row, windows.target_col,
                                      windows.neighborhood_extent, h, w);

  double t_sum = 0.0;
  std::size_t t_count = 0;
  for (std::size_t r = target.r0; r < target.r1; ++r) {
    for (std::size_t c = target.c0; c < target.c1; ++c) {
      t_sum += image.at(r, c);
      ++t_count;
    }
  }
  double b_sum = 0.0;
  std::size_t b_count = 0;
  for (std::size_t r = hood.r0; r < hood.r1; ++r) {
    for (std::size_t c = hood.c0; c < hood.c1; ++c) {
      if (target.contains(r, c)) continue;
      b_sum += image.at(r, c);
      ++b_count;
    }
  }
  if (b_count == 0) {
    throw DegenerateError("SCR background window is empty after clipping");
  }
  const double mu_t = t_sum / double(t_count);
  const double mu_b = b_sum / double(b_count);
  double var = 0.0;
  for (std::size_t r = hood.r0; r < hood.r1; ++r) {
    for (std::size_t c = hood.c0; c < hood.c1; ++c) {
      if (target.contains(r, c)) continue;
      const double d = image.at(r, c) - mu_b;
      var += d * d;
    }
  }
  const double sigma_b = std::sqrt(var / double(b_count));
  if (sigma_b < 1e-9) {
    throw DegenerateError("SCR background is constant (sigma_b < 1e-9)");
  }
  return std::abs(mu_t - mu_b) / sigma_b;
}

std::vector<ScrSweepRow> scr_sweep(
    const Tensor& image, const ScrWindows& windows,
    const std::vector<std::pair<std::size_t, std::size_t>>& cuts) {
  image.require_rank(2, "scr_sweep image");
  windows.validate();
  const Tensor coeffs = dct2(image);
  std::vector<ScrSweepRow> rows;
  rows.reserve(cuts.size());
  for (const auto& [cut_rows, cut_cols] : cuts) {
    const Tensor mask =
        region_mask(image.dim(0), image.dim(1), cut_rows, cut_cols);
    Tensor masked = coeffs;
    for (std::size_t i = 0; i < masked.size(); ++i) masked[i] *= mask[i];
    ScrSweepRow row{cut_rows, cut_cols, std::nullopt};
    try {
      row.scr = scr(idct2(masked), windows);
    } catch (const DegenerateError&) {
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<std::size_t, std::size_t>> square_cut_grid(
    std::size_t max_cut, std::size_t step) {
  if (step == 0) throw ValidationError("cut grid step must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> cuts;
  for (std::size_t c = 0; c <= max_cut; c += step) cuts.emplace_back(c, c);
  if (cuts.back().first != max_cut) cuts.emplace_back(max_cut, max_cut);
  return cuts;
}

}  // namespace hsfpn
