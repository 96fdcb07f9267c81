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

#include "hsfpn/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hsfpn/errors.h"

namespace hsfpn {
namespace {

void require_same_dims(const Tensor& a, const Tensor& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw ShapeError(std::string(what) + ": dims " + dims_to_string(a.dims()) +
                     " vs " + dims_to_string(b.dims()));
  }
}

}  // namespace

void ConvSpec::validate() const {
  if (in_channels == 0 || out_channels == 0 || groups == 0) {
    throw ValidationError("conv: channel and group counts must be positive");
  }
  if (kernel != 1 && kernel != 3) {
    throw ValidationError("conv: kernel must be 1 or 3, got " +
                          std::to_string(kernel));
  }
  if (in_channels % groups != 0 || out_channels % groups != 0) {
    throw ValidationError("conv: groups=" + std::to_string(groups) +
                          " must divide in=" + std::to_string(in_channels) +
                          " and out=" + std::to_string(out_channels));
  }
}

Tensor conv2d(const Tensor& x, const ConvSpec& spec, const Tensor& weights,
              const std::optional<Tensor>& bias) {
  spec.validate();
  x.require_rank(4, "conv2d input");
  if (x.c() != spec.in_channels) {
    throw ShapeError("conv2d: input has " + std::to_string(x.c()) +
                     " channels, spec expects " +
                     std::to_string(spec.in_channels));
  }
  if (weights.dims() != spec.weight_dims()) {
    throw ShapeError("conv2d: weight dims " + dims_to_string(weights.dims()) +
                     ", expected " + dims_to_string(spec.weight_dims()));
  }
  if (!weights.all_finite()) {
    throw ValidationError("conv2d: non-finite weight");
  }
  if (spec.has_bias != bias.has_value()) {
    throw ShapeError("conv2d: bias presence does not match spec");
  }
  if (bias) {
    if (bias->dims() != Tensor::Dims{spec.out_channels}) {
      throw ShapeError("conv2d: bias dims " + dims_to_string(bias->dims()));
    }
    if (!bias->all_finite()) throw ValidationError("conv2d: non-finite bias");
  }

  const std::size_t N = x.n(), H = x.h(), W = x.w();
  const std::size_t cin_g = spec.in_channels / spec.groups;
  const std::size_t cout_g = spec.out_channels / spec.groups;
  const std::size_t K = spec.kernel;
  const std::ptrdiff_t pad = K / 2;
  Tensor out({N, spec.out_channels, H, W});
  std::vector<double> acc(H * W);

  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t oc = 0; oc < spec.out_channels; ++oc) {
      const std::size_t g = oc / cout_g;
      std::fill(acc.begin(), acc.end(), bias ? double((*bias)[oc]) : 0.0);
      for (std::size_t icg = 0; icg < cin_g; ++icg) {
        const std::size_t ic = g * cin_g + icg;
        const auto in = x.plane(n, ic);
        const float* wk = &weights.data()[(oc * cin_g + icg) * K * K];
        for (std::size_t ky = 0; ky < K; ++ky) {
          const std::ptrdiff_t dy = std::ptrdiff_t(ky) - pad;
          const std::size_t y0 = dy < 0 ? std::size_t(-dy) : 0;
          const std::size_t y1 = dy > 0 ? H - std::size_t(dy) : H;
          for (std::size_t kx = 0; kx < K; ++kx) {
            const std::ptrdiff_t dx = std::ptrdiff_t(kx) - pad;
            const double wv = wk[ky * K + kx];
            if (wv == 0.0) continue;
            const std::size_t x0 = dx < 0 ? std::size_t(-dx) : 0;
            const std::size_t x1 = dx > 0 ? W - std::size_t(dx) : W;
            for (std::size_t y = y0; y < y1; ++y) {
              double* arow = &acc[y * W];
              const float* irow = in.data() + (std::ptrdiff_t(y) + dy) * W;
              for (std::size_t xx = x0; xx < x1; ++xx) {
                arow[xx] += wv * double(irow[std::ptrdiff_t(xx) + dx]);
              }
            }
          }
        }
      }
      auto dst = out.plane(n, oc);
      for (std::size_t i = 0; i < H * W; ++i) dst[i] = float(acc[i]);
    }
  }
  return out;
}

Tensor adaptive_pool(const Tensor& x, std::size_t out_h, std::size_t out_w,
                     PoolMode mode) {
  x.require_rank(4, "adaptive_pool input");
  const std::size_t H = x.h(), W = x.w();
  if (out_h == 0 || out_w == 0 || out_h > H || out_w > W) {
    throw ShapeError("adaptive_pool: cannot pool " + std::to_string(H) + "x" +
                     std::to_string(W) + " to " + std::to_string(out_h) + "x" +
                     std::to_string(out_w));
  }
  Tensor out({x.n(), x.c(), out_h, out_w});
  for (std::size_t n = 0; n < x.n(); ++n) {
    for (std::size_t c = 0; c < x.c(); ++c) {
      const auto in = x.plane(n, c);
      auto dst = out.plane(n, c);
      for (std::size_t oy = 0; oy < out_h; ++oy) {
        const std::size_t ys = oy * H / out_h;
        const std::size_t ye = ((oy + 1) * H + out_h - 1) / out_h;
        for (std::size_t ox = 0; ox < out_w; ++ox) {
          const std::size_t xs = ox * W / out_w;
          const std::size_t xe = ((ox + 1) * W + out_w - 1) / out_w;
          double sum = 0.0;
          float best = -std::numeric_limits<float>::infinity();
          for (std::size_t y = ys; y < ye; ++y) {
            for (std::size_t xx = xs; xx < xe; ++xx) {
              const float v = in[y * W + xx];
              sum += v;
              best = std::max(best, v);
            }
          }
          dst[oy * out_w + ox] =
              mode == PoolMode::kAvg
                  ? float(sum / double((ye - ys) * (xe - xs)))
                  : best;
        }
      }
    }
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (float& v : out.data()) v = std::max(v, 0.0f);
  return out;
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (float& v : out.data()) v = float(1.0 / (1.0 + std::exp(-double(v))));
  return out;
}

Tensor softmax_rows(const Tensor& m) {
  m.require_rank(2, "softmax_rows input");
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  Tensor out({rows, cols});
  std::vector<double> e(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double hi = m.at(r, 0);
    for (std::size_t c = 1; c < cols; ++c)
      hi = std::max(hi, double(m.at(r, c)));
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      e[c] = std::exp(double(m.at(r, c)) - hi);
      total += e[c];
    }
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = float(e[c] / total);
  }
  return out;
}

Tensor upsample2x(const Tensor& x) {
  x.require_rank(4, "upsample2x input");
  const std::size_t H = x.h(), W = x.w();
  Tensor out({x.n(), x.c(), 2 * H, 2 * W});
  for (std::size_t n = 0; n < x.n(); ++n) {
    for (std::size_t c = 0; c < x.c(); ++c) {
      const auto in = x.plane(n, c);
      auto dst = out.plane(n, c);
      for (std::size_t y = 0; y < 2 * H; ++y) {
        for (std::size_t xx = 0; xx < 2 * W; ++xx) {
          dst[y * 2 * W + xx] = in[(y / 2) * W + xx / 2];
        }
      }
    }
  }
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  a.require_rank(2, "matmul lhs");
  b.require_rank(2, "matmul rhs");
  const std::size_t R = a.dim(0), S = a.dim(1), T = b.dim(1);
  if (b.dim(0) != S) {
    throw ShapeError("matmul: inner dims " + dims_to_string(a.dims()) + " * " +
                     dims_to_string(b.dims()));
  }
  Tensor out({R, T});
  std::vector<double> acc(T);
  for (std::size_t r = 0; r < R; ++r) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const double av = a.at(r, s);
      const float* brow = &b.data()[s * T];
      for (std::size_t t = 0; t < T; ++t) acc[t] += av * double(brow[t]);
    }
    for (std::size_t t = 0; t < T; ++t) out.at(r, t) = float(acc[t]);
  }
  return out;
}

Tensor transpose(const Tensor& m) {
  m.require_rank(2, "transpose input");
  Tensor out({m.dim(1), m.dim(0)});
  for (std::size_t r = 0; r < m.dim(0); ++r) {
    for (std::size_t c = 0; c < m.dim(1); ++c) out.at(c, r) = m.at(r, c);
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_dims(a, b, "add");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Tensor scale(const Tensor& x, float s) {
  Tensor out = x;
  for (float& v : out.data()) v *= s;
  return out;
}

Tensor scale_channels(const Tensor& x, const Tensor& u) {
  x.require_rank(4, "scale_channels input");
  if (u.dims() != Tensor::Dims{x.n(), x.c(), 1, 1}) {
    throw ShapeError("scale_channels: weights " + dims_to_string(u.dims()) +
                     " do not broadcast over " + dims_to_string(x.dims()));
  }
  Tensor out = x;
  for (std::size_t n = 0; n < x.n(); ++n) {
    for (std::size_t c = 0; c < x.c(); ++c) {
      const float s = u.at(n, c, 0, 0);
      for (float& v : out.plane(n, c)) v *= s;
    }
  }
  return out;
}

Tensor scale_pixels(const Tensor& x, const Tensor& u) {
  x.require_rank(4, "scale_pixels input");
  if (u.dims() != Tensor::Dims{x.n(), 1, x.h(), x.w()}) {
    throw ShapeError("scale_pixels: mask " + dims_to_string(u.dims()) +
                     " does not broadcast over " + dims_to_string(x.dims()));
  }
  Tensor out = x;
  for (std::size_t n = 0; n < x.n(); ++n) {
    const auto mask = u.plane(n, 0);
    for (std::size_t c = 0; c < x.c(); ++c) {
      auto p = out.plane(n, c);
      for (std::size_t i = 0; i < p.size(); ++i) p[i] *= mask[i];
    }
  }
  return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  a.require_rank(4, "concat_channels lhs");
  b.require_rank(4, "concat_channels rhs");
  if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w()) {
    throw ShapeError("concat_channels: dims " + dims_to_string(a.dims()) +
                     " vs " + dims_to_string(b.dims()));
  }
  Tensor out({a.n(), a.c() + b.c(), a.h(), a.w()});
  for (std::size_t n = 0; n < a.n(); ++n) {
    for (std::size_t c = 0; c < a.c(); ++c) {
      std::ranges::copy(a.plane(n, c), out.plane(n, c).begin());
    }
    for (std::size_t c = 0; c < b.c(); ++c) {
      std::ranges::copy(b.plane(n, c), out.plane(n, a.c() + c).begin());
    }
  }
  return out;
}

Tensor sum_planes(const Tensor& x) {
  x.require_rank(4, "sum_planes input");
  Tensor out({x.n(), x.c(), 1, 1});
  for (std::size_t n = 0; n < x.n(); ++n) {
    for (std::size_t c = 0; c < x.c(); ++c) {
      double s = 0.0;
      for (float v : x.plane(n, c)) s += v;
      out.at(n, c, 0, 0) = float(s);
    }
  }
  return out;
}

}  // namespace hsfpn
