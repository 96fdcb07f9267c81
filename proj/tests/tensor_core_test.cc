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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hsfpn/errors.h"
#include "hsfpn/ops.h"
#include "hsfpn/random.h"
#include "oracles.h"

namespace hsfpn {
namespace {

ConvLayer random_layer(const ConvSpec& spec, Rng& rng) {
  ConvLayer layer{spec, random_tensor(spec.weight_dims(), rng), std::nullopt};
  if (spec.has_bias) layer.bias = random_tensor({spec.out_channels}, rng);
  return layer;
}

Tensor iota(Tensor::Dims dims) {
  Tensor t(std::move(dims));
  std::iota(t.data().begin(), t.data().end(), 0.0f);
  return t;
}

TEST(TensorTest, RejectsBadShapes) {
  EXPECT_THROW(Tensor({2, 0, 3}), ShapeError);
  EXPECT_THROW(Tensor({1, 1, 1, 1, 1}), ShapeError);
  EXPECT_THROW(Tensor({2, 2}, std::vector<float>(3)), ShapeError);
  EXPECT_EQ(Tensor({2, 3, 4}).size(), 24u);
}

TEST(Conv2dTest, IdentityOneByOne) {
  Rng rng(1);
  const Tensor x = random_tensor({2, 3, 4, 5}, rng);
  Tensor w({3, 3, 1, 1});
  for (std::size_t i = 0; i < 3; ++i) w[i * 3 + i] = 1.0f;
  const Tensor y = conv2d(x, {3, 3, 1, 1, true}, w, Tensor({3}));
  EXPECT_EQ(y, x);
}

TEST(Conv2dTest, ZeroPaddingArithmetic) {
  const Tensor x({1, 1, 3, 3}, 1.0f);
  const Tensor w({1, 1, 3, 3}, 1.0f);
  const Tensor y = conv2d(x, {1, 1, 3, 1, false}, w, std::nullopt);
  EXPECT_FLOAT_EQ(y.at(0, 0, 1, 1), 9.0f);
  for (auto [r, c] : {std::pair{0, 0}, {0, 2}, {2, 0}, {2, 2}}) {
    EXPECT_FLOAT_EQ(y.at(0, 0, r, c), 4.0f);
  }
  EXPECT_FLOAT_EQ(y.at(0, 0, 0, 1), 6.0f);
}

TEST(Conv2dTest, GroupedMatchesNaiveOracle) {
  Rng rng(7);
  const Tensor x = random_tensor({2, 4, 5, 5}, rng);
  for (std::size_t k : {1u, 3u}) {
    const ConvLayer layer = random_layer({4, 6, k, 2, true}, rng);
    EXPECT_LT(max_abs_diff(layer(x), oracle::conv2d(x, layer)), 1e-5) << k;
  }
}

TEST(Conv2dTest, GroupsEqualIndependentSlices) {
  Rng rng(11);
  const std::size_t cin = 8, cout = 8;
  const Tensor x = random_tensor({1, cin, 6, 7}, rng);
  for (std::size_t g : {1u, 2u, 4u}) {
    const ConvLayer full = random_layer({cin, cout, 3, g, true}, rng);
    const Tensor y = full(x);
    const std::size_t ci = cin / g, co = cout / g;
    for (std::size_t grp = 0; grp < g; ++grp) {
      Tensor xs({1, ci, 6, 7});
      for (std::size_t c = 0; c < ci; ++c) {
        std::ranges::copy(x.plane(0, grp * ci + c), xs.plane(0, c).begin());
      }
      ConvLayer part{
          {ci, co, 3, 1, true}, Tensor({co, ci, 3, 3}), Tensor({co})};
      for (std::size_t o = 0; o < co; ++o) {
        for (std::size_t i = 0; i < ci * 9; ++i) {
          part.weight[o * ci * 9 + i] =
              full.weight[(grp * co + o) * ci * 9 + i];
        }
        (*part.bias)[o] = (*full.bias)[grp * co + o];
      }
      const Tensor ys = part(xs);
      for (std::size_t o = 0; o < co; ++o) {
        const auto a = ys.plane(0, o);
        const auto b = y.plane(0, grp * co + o);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()))
            << "g=" << g << " group " << grp;
      }
    }
  }
}

TEST(Conv2dTest, Errors) {
  const Tensor x({1, 3, 4, 4});
  EXPECT_THROW(
      conv2d(x, {4, 4, 1, 1, false}, Tensor({4, 4, 1, 1}), std::nullopt),
      ShapeError);
  Tensor w({3, 3, 1, 1});
  w[0] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(conv2d(x, {3, 3, 1, 1, false}, w, std::nullopt),
               ValidationError);
  EXPECT_THROW(
      conv2d(x, {3, 4, 1, 2, false}, Tensor({4, 1, 1, 1}), std::nullopt),
      ValidationError);
  EXPECT_THROW(
      conv2d(x, {3, 3, 5, 1, false}, Tensor({3, 3, 5, 5}), std::nullopt),
      ValidationError);
}

TEST(AdaptivePoolTest, UnitWindowsAreIdentity) {
  Rng rng(3);
  const Tensor x = random_tensor({2, 3, 5, 6}, rng);
  EXPECT_EQ(adaptive_pool(x, 5, 6, PoolMode::kAvg), x);
  EXPECT_EQ(adaptive_pool(x, 5, 6, PoolMode::kMax), x);
}

TEST(AdaptivePoolTest, GlobalPooling) {
  const Tensor x = iota({1, 1, 4, 4});
  EXPECT_FLOAT_EQ(adaptive_pool(x, 1, 1, PoolMode::kAvg)[0], 7.5f);
  EXPECT_FLOAT_EQ(adaptive_pool(x, 1, 1, PoolMode::kMax)[0], 15.0f);
}

TEST(AdaptivePoolTest, OverlappingWindowsMatchOracle) {
  Rng rng(5);
  const Tensor x = random_tensor({1, 1, 5, 5}, rng);
  for (PoolMode mode : {PoolMode::kAvg, PoolMode::kMax}) {
    EXPECT_LT(max_abs_diff(adaptive_pool(x, 2, 2, mode),
                           oracle::adaptive_pool(x, 2, 2, mode)),
              1e-6);
  }
  const Tensor y = random_tensor({2, 3, 17, 13}, rng);
  EXPECT_LT(max_abs_diff(adaptive_pool(y, 5, 4, PoolMode::kAvg),
                         oracle::adaptive_pool(y, 5, 4, PoolMode::kAvg)),
            1e-6);
}

TEST(AdaptivePoolTest, FullMapAverageIsMean) {
  Rng rng(9);
  const Tensor x = random_tensor({1, 1, 9, 7}, rng);
  double mean = 0.0;
  for (float v : x.data()) mean += v;
  mean /= double(x.size());
  EXPECT_NEAR(adaptive_pool(x, 1, 1, PoolMode::kAvg)[0], mean, 1e-6);
}

TEST(AdaptivePoolTest, RejectsUpsampling) {
  EXPECT_THROW(adaptive_pool(Tensor({1, 1, 3, 3}), 4, 2, PoolMode::kAvg),
               ShapeError);
}

TEST(ReluTest, Basics) {
  const Tensor x({3}, std::vector<float>{-1.0f, 0.0f, 2.0f});
  EXPECT_EQ(relu(x), Tensor({3}, std::vector<float>{0.0f, 0.0f, 2.0f}));
  Rng rng(2);
  const Tensor pos = random_tensor({4, 4}, rng, 0.0f, 1.0f);
  EXPECT_EQ(relu(pos), pos);
  const Tensor r = random_tensor({5, 5}, rng);
  EXPECT_EQ(relu(relu(r)), relu(r));
}

TEST(SoftmaxTest, UniformAndStable) {
  const Tensor u = softmax_rows(Tensor({1, 3}));
  for (float v : u.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-7);
  const Tensor s =
      softmax_rows(Tensor({1, 2}, std::vector<float>{1000.0f, 0.0f}));
  EXPECT_TRUE(s.all_finite());
  EXPECT_NEAR(s[0], 1.0, 1e-7);
  EXPECT_NEAR(s[1], 0.0, 1e-7);
}

TEST(SoftmaxTest, RowsNormalizedAndPermutationEquivariant) {
  Rng rng(13);
  const Tensor m = random_tensor({7, 7}, rng, -5.0f, 5.0f);
  const Tensor s = softmax_rows(m);
  for (std::size_t r = 0; r < 7; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 7; ++c) {
      EXPECT_GE(s.at(r, c), 0.0f);
      sum += s.at(r, c);
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
  std::vector<std::size_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  Tensor pm({7, 7});
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 7; ++c) pm.at(r, c) = m.at(r, perm[c]);
  }
  const Tensor ps = softmax_rows(pm);
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 7; ++c) {
      EXPECT_NEAR(ps.at(r, c), s.at(r, perm[c]), 1e-7);
    }
  }
}

TEST(Upsample2xTest, Replication) {
  const Tensor one = upsample2x(Tensor({1, 1, 1, 1}, 5.0f));
  EXPECT_EQ(one, Tensor({1, 1, 2, 2}, 5.0f));
  const Tensor x({1, 1, 2, 2}, std::vector<float>{1, 2, 3, 4});
  const Tensor y = upsample2x(x);
  const std::vector<float> want = {1, 1, 2, 2, 1, 1, 2, 2,
                                   3, 3, 4, 4, 3, 3, 4, 4};
  EXPECT_EQ(y, Tensor({1, 1, 4, 4}, want));
}

TEST(Upsample2xTest, StrideTwoRoundTrip) {
  Rng rng(17);
  const Tensor x = random_tensor({2, 3, 4, 5}, rng);
  const Tensor y = upsample2x(x);
  EXPECT_EQ(y, oracle::upsample2x(x));
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t col = 0; col < 5; ++col) {
          EXPECT_EQ(y.at(n, c, 2 * r, 2 * col), x.at(n, c, r, col));
        }
      }
    }
  }
}

TEST(MatmulTest, IdentityScalarAndOracle) {
  Rng rng(19);
  const Tensor b = random_tensor({4, 3}, rng);
  Tensor eye({4, 4});
  for (std::size_t i = 0; i < 4; ++i) eye.at(i, i) = 1.0f;
  EXPECT_EQ(matmul(eye, b), b);
  EXPECT_FLOAT_EQ(matmul(Tensor({1, 1}, 3.0f), Tensor({1, 1}, -2.5f))[0],
                  -7.5f);
  const Tensor p = random_tensor({5, 6}, rng);
  const Tensor q = random_tensor({6, 4}, rng);
  EXPECT_LT(max_abs_diff(matmul(p, q), oracle::matmul(p, q)), 1e-5);
  EXPECT_THROW(matmul(p, p), ShapeError);
}

TEST(OpsTest, PureAndDeterministic) {
  Rng rng(23);
  const Tensor x = random_tensor({1, 4, 6, 6}, rng);
  const ConvLayer layer = random_layer({4, 4, 3, 2, true}, rng);
  EXPECT_TRUE(bitwise_equal(layer(x), layer(x)));
  const Tensor m = random_tensor({6, 6}, rng);
  EXPECT_TRUE(bitwise_equal(softmax_rows(m), softmax_rows(m)));
  EXPECT_TRUE(bitwise_equal(adaptive_pool(x, 4, 4, PoolMode::kAvg),
                            adaptive_pool(x, 4, 4, PoolMode::kAvg)));
}

TEST(OpsTest, BroadcastProducts) {
  const Tensor x({1, 2, 2, 2}, 3.0f);
  Tensor u({1, 2, 1, 1});
  u[0] = 2.0f;
  u[1] = -1.0f;
  const Tensor yc = scale_channels(x, u);
  EXPECT_FLOAT_EQ(yc.at(0, 0, 1, 1), 6.0f);
  EXPECT_FLOAT_EQ(yc.at(0, 1, 0, 1), -3.0f);
  Tensor m({1, 1, 2, 2});
  m[3] = 0.5f;
  const Tensor yp = scale_pixels(x, m);
  EXPECT_FLOAT_EQ(yp.at(0, 1, 1, 1), 1.5f);
  EXPECT_FLOAT_EQ(yp.at(0, 1, 0, 0), 0.0f);
  EXPECT_THROW(scale_channels(x, m), ShapeError);
}

}  // namespace
}  // namespace hsfpn
