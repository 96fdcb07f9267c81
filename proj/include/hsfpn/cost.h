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

#ifndef HSFPN_COST_H_
#define HSFPN_COST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsfpn/pyramid.h"
#include "hsfpn/sdp.h"

namespace hsfpn {

// Parameter and multiply-accumulate count of one module at one level.
// MACs cover convolutions and attention matmuls only; pooling, ReLU and the
// broadcast products are not counted.
struct CostEntry {
  int level = 0;
  std::string module;
  std::uint64_t weights = 0;
  std::uint64_t biases = 0;
  std::uint64_t macs = 0;

  std::uint64_t params() const { return weights + biases; }
};

struct OpCostReport {
  std::vector<CostEntry> entries;
  // Level-2 extents the MACs were computed for, if any.
  std::optional<std::pair<std::size_t, std::size_t>> base_extent;

  std::uint64_t total_params() const;
  std::uint64_t total_macs() const;
  std::uint64_t module_params(std::string_view module) const;
  std::uint64_t level_params(int level) const;

  std::string to_json() const;
  std::string to_csv() const;
  std::string to_table() const;
};

// Analytic parameter counts of the pyramid described by `config`. With
// `base_extent` = (H_2, W_2) the report also carries MACs for that input;
// both extents must be multiples of 8.
//
// Modules: lateral, hfp.channel_path, hfp.spatial_path, hfp.fuse,
// sdp.projections, sdp.attention (MACs only) and output.
OpCostReport count_params(const PyramidConfig& config,
                          std::optional<std::pair<std::size_t, std::size_t>>
                              base_extent = std::nullopt);

// Rows of the attention comparison: method, complexity, MACs, multiplier.
std::string attention_cost_table(const CostModel& model);
std::string attention_cost_json(const CostModel& model);
std::string attention_cost_csv(const CostModel& model);

}  // namespace hsfpn

#endif  // HSFPN_COST_H_
