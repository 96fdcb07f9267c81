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

#include "hsfpn/cost.h"

#include <gtest/gtest.h>

#include <cmath>

#include "hsfpn/errors.h"
#include "hsfpn/pyramid.h"
#include "json.hpp"

namespace hsfpn {
namespace {

PyramidConfig bias_free() {
  PyramidConfig config;
  config.conv_bias = false;
  config.sdp_bias = false;
  return config;
}

std::uint64_t module_at(const OpCostReport& report, int level,
                        std::string_view module) {
  for (const CostEntry& e : report.entries) {
    if (e.level == level && e.module == module) return e.params();
  }
  return 0;
}

TEST(CountParamsTest, FuseConvAtFullWidth) {
  const OpCostReport report = count_params(bias_free());
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    EXPECT_EQ(module_at(report, level, "hfp.fuse"), 256u * 256u * 9u);
  }
  EXPECT_EQ(report.module_params("hfp.fuse"), 2359296u);
  // Only-SP minus baseline in the published ablation: 71.31 M - 68.95 M.
  const double published = (71.31 - 68.95) * 1e6;
  EXPECT_LT(std::abs(double(report.module_params("hfp.fuse")) - published) /
                published,
            0.02);
}

TEST(CountParamsTest, SdpProjectionsSkipTopLevel) {
  const OpCostReport report = count_params(bias_free());
  EXPECT_EQ(report.module_params("sdp.projections"), 3u * 3u * 256u * 256u);
  EXPECT_EQ(module_at(report, 5, "sdp.projections"), 0u);
  EXPECT_EQ(report.module_params("sdp.attention"), 0u);
}

TEST(CountParamsTest, ChannelAndSpatialPaths) {
  PyramidConfig config;
  const OpCostReport report = count_params(config);
  // Two grouped C->C convs and one grouped 2C->C conv, 16 groups, biased.
  const std::uint64_t cp = 2 * (256 * 16 + 256) + (256 * 32 + 256);
  EXPECT_EQ(module_at(report, 3, "hfp.channel_path"), cp);
  EXPECT_EQ(module_at(report, 3, "hfp.spatial_path"), 257u);
}

TEST(CountParamsTest, DisabledModulesAddNothing) {
  PyramidConfig fpn = bias_free();
  fpn.mode = PyramidMode::kFpnBaseline;
  PyramidConfig off = bias_free();
  off.channel_path = false;
  off.spatial_path = false;
  off.sdp = false;
  EXPECT_EQ(count_params(off).total_params(), count_params(fpn).total_params());

  PyramidConfig only_sp = off;
  only_sp.spatial_path = true;
  EXPECT_EQ(
      count_params(only_sp).total_params() - count_params(fpn).total_params(),
      2359296u + 4u * 256u);
}

TEST(CountParamsTest, MatchesInstantiatedWeights) {
  for (PyramidMode mode : {PyramidMode::kHsfpn, PyramidMode::kFpnBaseline}) {
    for (bool bias : {false, true}) {
      PyramidConfig config;
      config.channels = 32;
      config.in_channels = {16, 32, 48, 64};
      config.k = 4;
      config.cp_groups = 4;
      config.mode = mode;
      config.conv_bias = bias;
      config.sdp_bias = bias;
      EXPECT_EQ(count_params(config).total_params(),
                init_weights(config).param_count());
    }
  }
}

TEST(CountParamsTest, MacsForBaseExtent) {
  const OpCostReport report = count_params(bias_free(), {{64, 64}});
  for (const CostEntry& e : report.entries) {
    if (e.module == "output" && e.level == 3) {
      EXPECT_EQ(e.macs, 589824u * 32u * 32u);
    }
    if (e.module == "sdp.attention" && e.level == 2) {
      // 64 tiles of 8x8 pixels.
      EXPECT_EQ(e.macs, 2u * 64u * 64u * 64u * 256u);
    }
  }
  EXPECT_THROW(count_params(bias_free(), {{60, 64}}), ShapeError);
}

TEST(CountParamsTest, Reports) {
  const OpCostReport report = count_params(PyramidConfig{});
  const auto json = nlohmann::json::parse(report.to_json());
  EXPECT_EQ(json["total_params"].get<std::uint64_t>(), report.total_params());
  EXPECT_NE(report.to_csv().find("level,module,weights,biases,params,macs"),
            std::string::npos);
  EXPECT_NE(report.to_table().find("hfp.fuse"), std::string::npos);
  std::uint64_t sum = 0;
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    sum += report.level_params(level);
  }
  EXPECT_EQ(sum, report.total_params());
}

TEST(AttentionTableTest, MultiplierSymbols) {
  const CostModel m{4, 8, 8, 16};
  const std::string table = attention_cost_table(m);
  EXPECT_NE(table.find("hw/n"), std::string::npos);
  const auto json = nlohmann::json::parse(attention_cost_json(m));
  ASSERT_EQ(json["rows"].size(), 3u);
  EXPECT_EQ(json["rows"][0]["method"], "vit");
  EXPECT_EQ(json["rows"][1]["multiplier"], "hw/n");
  EXPECT_EQ(json["rows"][1]["multiplier_num"], 16);
  EXPECT_EQ(json["rows"][1]["multiplier_den"], 1);
  EXPECT_EQ(json["rows"][2]["multiplier_num"], 64);
  const std::string csv = attention_cost_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "method,complexity,macs,multiplier,multiplier_value");
}

}  // namespace
}  // namespace hsfpn
