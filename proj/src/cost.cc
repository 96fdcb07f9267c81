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

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>

#include "hsfpn/errors.h"
#include "json.hpp"

namespace hsfpn {
namespace {

using nlohmann::json;

constexpr std::array<AttentionLayout, 3> kLayouts = {
    AttentionLayout::kVit, AttentionLayout::kSdp, AttentionLayout::kGlobal};

CostEntry conv_entry(int level, std::string module, const ConvSpec& spec,
                     std::uint64_t pixels) {
  return {level, std::move(module), spec.weight_count(),
          spec.has_bias ? spec.out_channels : 0, spec.weight_count() * pixels};
}

// Sums a run of conv entries into a single module entry.
CostEntry merged(int level, std::string module,
                 std::initializer_list<CostEntry> parts) {
  CostEntry out{level, std::move(module), 0, 0, 0};
  for (const CostEntry& p : parts) {
    out.weights += p.weights;
    out.biases += p.biases;
    out.macs += p.macs;
  }
  return out;
}

std::string multiplier_symbol(AttentionLayout layout) {
  switch (layout) {
    case AttentionLayout::kVit:
      return "1";
    case AttentionLayout::kSdp:
      return "hw/n";
    case AttentionLayout::kGlobal:
      return "hw";
  }
  return "?";
}

std::string ratio_text(const Ratio& r) {
  return r.den == 1 ? std::to_string(r.num)
                    : std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace

std::uint64_t OpCostReport::total_params() const {
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.params();
  return total;
}

std::uint64_t OpCostReport::total_macs() const {
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.macs;
  return total;
}

std::uint64_t OpCostReport::module_params(std::string_view module) const {
  std::uint64_t total = 0;
  for (const auto& e : entries) {
    if (e.module == module) total += e.params();
  }
  return total;
}

std::uint64_t OpCostReport::level_params(int level) const {
  std::uint64_t total = 0;
  for (const auto& e : entries) {
    if (e.level == level) total += e.params();
  }
  return total;
}

std::string OpCostReport::to_json() const {
  json doc;
  doc["entries"] = json::array();
  for (const auto& e : entries) {
    doc["entries"].push_back({{"level", e.level},
                              {"module", e.module},
                              {"weights", e.weights},
                              {"biases", e.biases},
                              {"params", e.params()},
                              {"macs", e.macs}});
  }
  json per_level = json::object();
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    per_level[std::to_string(level)] = level_params(level);
  }
  doc["params_per_level"] = per_level;
  doc["total_params"] = total_params();
  doc["total_macs"] = total_macs();
  if (base_extent) {
    doc["base_extent"] = {base_extent->first, base_extent->second};
  }
  return doc.dump(2);
}

std::string OpCostReport::to_csv() const {
  std::ostringstream out;
  out << "level,module,weights,biases,params,macs\n";
  for (const auto& e : entries) {
    out << e.level << ',' << e.module << ',' << e.weights << ',' << e.biases
        << ',' << e.params() << ',' << e.macs << '\n';
  }
  return out.str();
}

std::string OpCostReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(7) << "level" << std::setw(20) << "module"
      << std::right << std::setw(14) << "params" << std::setw(18) << "MACs"
      << '\n';
  for (const auto& e : entries) {
    out << std::left << std::setw(7) << ("P" + std::to_string(e.level))
        << std::setw(20) << e.module << std::right << std::setw(14)
        << e.params() << std::setw(18) << e.macs << '\n';
  }
  out << std::left << std::setw(27) << "total" << std::right << std::setw(14)
      << total_params() << std::setw(18) << total_macs() << '\n';
  return out.str();
}

OpCostReport count_params(
    const PyramidConfig& config,
    std::optional<std::pair<std::size_t, std::size_t>> base_extent) {
  config.validate();
  if (base_extent && (base_extent->first == 0 || base_extent->second == 0 ||
                      base_extent->first % 8 || base_extent->second % 8)) {
    throw ShapeError("count_params: level-2 extents must be multiples of 8");
  }
  OpCostReport report;
  report.base_extent = base_extent;
  const std::size_t C = config.channels;
  const bool bias = config.conv_bias;

  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const std::size_t shift = std::size_t(level - kMinLevel);
    std::uint64_t h = 0, w = 0;
    if (base_extent) {
      h = base_extent->first >> shift;
      w = base_extent->second >> shift;
    }
    const std::uint64_t pixels = h * w;

    report.entries.push_back(conv_entry(
        level, "lateral", {config.in_channels[shift], C, 1, 1, bias}, pixels));

    if (config.hfp_enabled()) {
      if (config.channel_path) {
        const ConvSpec branch{C, C, 1, config.cp_groups, bias};
        const ConvSpec merge{2 * C, C, 1, config.cp_groups, bias};
        report.entries.push_back(merged(
            level, "hfp.channel_path",
            {conv_entry(level, "", branch, 1), conv_entry(level, "", branch, 1),
             conv_entry(level, "", merge, 1)}));
      }
      if (config.spatial_path) {
        report.entries.push_back(
            conv_entry(level, "hfp.spatial_path", {C, 1, 1, 1, bias}, pixels));
      }
      report.entries.push_back(
          conv_entry(level, "hfp.fuse", {C, C, 3, 1, bias}, pixels));
    }

    if (config.sdp_enabled() && level < kMaxLevel) {
      const ConvSpec proj{C, C, 1, 1, config.sdp_bias};
      report.entries.push_back(merged(level, "sdp.projections",
                                      {conv_entry(level, "", proj, pixels),
                                       conv_entry(level, "", proj, pixels),
                                       conv_entry(level, "", proj, pixels)}));
      CostEntry attention{level, "sdp.attention", 0, 0, 0};
      if (base_extent) {
        const std::uint64_t h5 = base_extent->first >> 3;
        const std::uint64_t w5 = base_extent->second >> 3;
        attention.macs = attention_cost({(h / h5) * (w / w5), h5, w5, C},
                                        AttentionLayout::kSdp);
      }
      report.entries.push_back(attention);
    }

    report.entries.push_back(
        conv_entry(level, "output", {C, C, 3, 1, bias}, pixels));
  }
  return report;
}

std::string attention_cost_table(const CostModel& model) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "method" << std::setw(16) << "complexity"
      << std::right << std::setw(22) << "MACs" << "  " << std::left
      << std::setw(12) << "multiplier" << "value\n";
  for (AttentionLayout layout : kLayouts) {
    out << std::left << std::setw(8) << layout_name(layout) << std::setw(16)
        << layout_complexity(layout) << std::right << std::setw(22)
        << attention_cost(model, layout) << "  " << std::left << std::setw(12)
        << multiplier_symbol(layout)
        << ratio_text(attention_multiplier(model, layout)) << '\n';
  }
  return out.str();
}

std::string attention_cost_json(const CostModel& model) {
  json doc;
  doc["model"] = {
      {"n", model.n}, {"h", model.h}, {"w", model.w}, {"c", model.c}};
  doc["rows"] = json::array();
  for (AttentionLayout layout : kLayouts) {
    const Ratio r = attention_multiplier(model, layout);
    doc["rows"].push_back({{"method", layout_name(layout)},
                           {"complexity", layout_complexity(layout)},
                           {"macs", attention_cost(model, layout)},
                           {"multiplier", multiplier_symbol(layout)},
                           {"multiplier_num", r.num},
                           {"multiplier_den", r.den}});
  }
  return doc.dump(2);
}

std::string attention_cost_csv(const CostModel& model) {
  std::ostringstream out;
  out << "method,complexity,macs,multiplier,multiplier_value\n";
  for (AttentionLayout layout : kLayouts) {
    out << layout_name(layout) << ",\"" << layout_complexity(layout) << "\","
        << attention_cost(model, layout) << ',' << multiplier_symbol(layout)
        << ',' << ratio_text(attention_multiplier(model, layout)) << '\n';
  }
  return out.str();
}

}  // namespace hsfpn
