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

// Command line front end: spectral filtering of PGM images, SCR sweeps,
// pyramid forward passes and cost tables.

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsfpn/cost.h"
#include "hsfpn/errors.h"
#include "hsfpn/frequency.h"
#include "hsfpn/pgm.h"
#include "hsfpn/pyramid.h"
#include "hsfpn/pyramid_io.h"
#include "hsfpn/scene.h"
#include "hsfpn/tensor_io.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hsfpn {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitError = 3;

// Parses "<a><sep><b>" into two unsigned integers.
std::pair<std::size_t, std::size_t> parse_pair(const std::string& text,
                                               char sep,
                                               const std::string& flag) {
  const auto pos = text.find(sep);
  std::size_t a = 0, b = 0;
  try {
    if (pos == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const std::string first = text.substr(0, pos);
    const std::string second = text.substr(pos + 1);
    if (first.empty() || second.empty() || first[0] == '-' ||
        second[0] == '-') {
      throw std::invalid_argument("");
    }
    a = std::stoull(first, &used);
    if (used != first.size()) throw std::invalid_argument("");
    b = std::stoull(second, &used);
    if (used != second.size()) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw CLI::ValidationError(flag, "expected <int>" + std::string(1, sep) +
                                         "<int>, got '" + text + "'");
  }
  return {a, b};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// ---------------------------------------------------------------------------

struct ScrFlags {
  std::string target_center;
  std::size_t target_size = 40;
  std::size_t neighborhood_size = 80;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--target-center", target_center,
                    "target centre as <row>,<col> (default: image centre)");
    cmd->add_option("--target-size", target_size, "target window extent")
        ->capture_default_str();
    cmd->add_option("--neighborhood-size", neighborhood_size,
                    "neighbourhood window extent")
        ->capture_default_str();
  }

  ScrWindows windows(const Tensor& image) const {
    ScrWindows w;
    if (target_center.empty()) {
      w.target_row = image.dim(0) / 2;
      w.target_col = image.dim(1) / 2;
    } else {
      std::tie(w.target_row, w.target_col) =
          parse_pair(target_center, ',', "--target-center");
    }
    w.target_extent = target_size;
    w.neighborhood_extent = neighborhood_size;
    w.validate();
    return w;
  }
};

std::optional<double> try_scr(const Tensor& image, const ScrWindows& windows) {
  try {
    return scr(image, windows);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

struct FilterCmd {
  std::string input;
  std::string output;
  std::string stats;
  double alpha = 0.25;
  std::string cut;
  bool recenter = false;
  ScrFlags scr_flags;

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "filter", "remove low DCT frequencies from a PGM image");
    cmd->add_option("input", input, "input P5 PGM")->required();
    cmd->add_option("-o,--output", output, "filtered PGM")->required();
    cmd->add_option("--stats", stats, "stats JSON (default: <output>.json)");
    auto* a = cmd->add_option("--alpha", alpha, "relative cut in [0, 1]")
                  ->capture_default_str();
    auto* c =
        cmd->add_option("--cut", cut, "absolute cut region <rows>x<cols>");
    a->excludes(c);
    cmd->add_flag("--recenter", recenter, "add 0.5 before quantising");
    scr_flags.add_to(cmd);
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    std::optional<std::pair<std::size_t, std::size_t>> region;
    if (!cut.empty()) region = parse_pair(cut, 'x', "--cut");
    const Tensor image = read_pgm(input);
    const std::size_t h = image.dim(0), w = image.dim(1);
    json doc;
    Tensor mask;
    if (region) {
      mask = region_mask(h, w, region->first, region->second);
      doc["cut"] = {region->first, region->second};
    } else {
      mask = highpass_mask(h, w, alpha);
      doc["alpha"] = alpha;
    }
    const Tensor filtered = apply_spectral_mask(image, mask);
    write_pgm(output, filtered, recenter ? 0.5f : 0.0f);

    const ScrWindows windows = scr_flags.windows(image);
    const auto before = try_scr(image, windows);
    const auto after = try_scr(filtered, windows);
    doc["input"] = input;
    doc["output"] = output;
    doc["dims"] = {h, w};
    doc["recenter"] = recenter;
    doc["target_center"] = {windows.target_row, windows.target_col};
    doc["target_size"] = windows.target_extent;
    doc["neighborhood_size"] = windows.neighborhood_extent;
    doc["scr_before"] = optional_number(before);
    doc["scr_after"] = optional_number(after);
    doc["degenerate"] = !before || !after;
    write_text(stats.empty() ? output + ".json" : stats, doc.dump(2) + "\n");
    if (!before || !after) {
      std::cerr << "degenerate: constant SCR background ("
                << (!before ? "input" : "filtered") << " image)\n";
      return kExitDegenerate;
    }
    return kExitOk;
  }

  int code = kExitOk;
};

struct SweepCmd {
  std::string input;
  std::string output;
  std::size_t max_cut = 0;
  std::size_t step = 5;
  ScrFlags scr_flags;

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "scr-sweep", "SCR as a function of the removed square cut region");
    cmd->add_option("input", input, "input P5 PGM")->required();
    cmd->add_option("-o,--output", output, "CSV path (default: stdout)");
    cmd->add_option("--max-cut", max_cut,
                    "largest cut side (default: larger image side)");
    cmd->add_option("--step", step, "cut side increment")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    scr_flags.add_to(cmd);
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const Tensor image = read_pgm(input);
    const ScrWindows windows = scr_flags.windows(image);
    const std::size_t limit =
        max_cut ? max_cut : std::max(image.dim(0), image.dim(1));
    const auto rows = scr_sweep(image, windows, square_cut_grid(limit, step));
    std::string csv = "cut_rows,cut_cols,scr\n";
    bool any = false;
    for (const ScrSweepRow& row : rows) {
      csv += std::to_string(row.cut_rows) + "," + std::to_string(row.cut_cols) +
             "," + (row.scr ? format_double(*row.scr) : "nan") + "\n";
      any |= row.scr.has_value();
    }
    write_text(output, csv);
    if (!any) {
      std::cerr << "degenerate: constant SCR background at every cut\n";
      return kExitDegenerate;
    }
    return kExitOk;
  }

  int code = kExitOk;
};

// Pyramid options shared by forward and params.
struct ConfigFlags {
  std::size_t channels = 256;
  double alpha = 0.25;
  std::size_t k = 16;
  std::size_t groups = 16;
  std::uint64_t seed = 0;
  std::string mode = "hsfpn";
  std::string fusion = "sdp";
  bool no_bias = false;
  bool sdp_bias = false;
  bool no_channel_path = false;
  bool no_spatial_path = false;
  bool no_sdp = false;
  std::vector<CLI::Option*> options;

  void add_to(CLI::App* cmd) {
    auto add = [&](CLI::Option* o) { options.push_back(o); };
    add(cmd->add_option("--channels", channels, "pyramid channels")
            ->capture_default_str());
    add(cmd->add_option("--alpha", alpha, "high-pass cut fraction")
            ->capture_default_str());
    add(cmd->add_option("--k", k, "channel-path pooling grid")
            ->capture_default_str());
    add(cmd->add_option("--groups", groups, "channel-path conv groups")
            ->capture_default_str());
    add(cmd->add_option("--seed", seed, "weight seed")->capture_default_str());
    add(cmd->add_option("--mode", mode, "hsfpn or fpn")
            ->capture_default_str()
            ->check(CLI::IsMember({"hsfpn", "fpn"})));
    add(cmd->add_option("--fusion", fusion, "sdp or sdp+add")
            ->capture_default_str()
            ->check(CLI::IsMember({"sdp", "sdp+add"})));
    add(cmd->add_flag("--no-bias", no_bias, "bias-free convolutions"));
    add(cmd->add_flag("--sdp-bias", sdp_bias, "biased SDP projections"));
    add(cmd->add_flag("--no-channel-path", no_channel_path));
    add(cmd->add_flag("--no-spatial-path", no_spatial_path));
    add(cmd->add_flag("--no-sdp", no_sdp));
  }

  PyramidConfig config() const {
    PyramidConfig c;
    c.channels = channels;
    c.alpha = alpha;
    c.k = k;
    c.cp_groups = groups;
    c.seed = seed;
    c.mode = parse_pyramid_mode(mode);
    c.fusion = parse_fusion_mode(fusion);
    c.conv_bias = !no_bias;
    c.sdp_bias = sdp_bias;
    c.channel_path = !no_channel_path;
    c.spatial_path = !no_spatial_path;
    c.sdp = !no_sdp;
    return c;
  }
};

struct ForwardCmd {
  std::string input;
  std::string output;
  std::string report;
  std::string weights;
  std::string save_weights_dir;
  ConfigFlags flags;

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "forward", "run the pyramid over a directory of c2..c5 features");
    cmd->add_option("input", input, "input pyramid directory")->required();
    cmd->add_option("-o,--output", output, "output pyramid directory")
        ->required();
    cmd->add_option("--report", report,
                    "report JSON (default: <output>/report.json)");
    auto* w = cmd->add_option("--weights", weights,
                              "load weights instead of initialising them");
    cmd->add_option("--save-weights", save_weights_dir,
                    "write the weights used");
    flags.add_to(cmd);
    for (CLI::Option* o : flags.options) w->excludes(o);
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const FeaturePyramid backbone = read_pyramid_dir(input);
    PyramidWeights w;
    if (!weights.empty()) {
      w = load_weights(weights);
    } else {
      PyramidConfig config = flags.config();
      for (int level = kMinLevel; level <= kMaxLevel; ++level) {
        config.in_channels[std::size_t(level - kMinLevel)] =
            backbone.at(level).c();
      }
      w = init_weights(config);
    }
    const PyramidConfig& config = w.config;
    const FeaturePyramid laterals = build_laterals(backbone, w);
    ForwardTrace trace;
    const FeaturePyramid out = hsfpn_forward(laterals, w, &trace);
    write_pyramid_dir(output, out);
    if (!save_weights_dir.empty()) save_weights(save_weights_dir, w);

    PyramidConfig baseline = config;
    baseline.mode = PyramidMode::kFpnBaseline;
    const auto& c2 = backbone.at(kMinLevel);
    const std::pair<std::size_t, std::size_t> base{c2.h(), c2.w()};
    const bool base_ok = base.first % 8 == 0 && base.second % 8 == 0;
    const OpCostReport analytic =
        base_ok ? count_params(config, base) : count_params(config);

    json doc;
    doc["mode"] = to_string(config.mode);
    doc["fusion"] = to_string(config.fusion);
    doc["config"] = json::parse(config_to_json(config));
    doc["levels"] = json::array();
    for (int level = kMinLevel; level <= kMaxLevel; ++level) {
      const Tensor& t = out.at(level);
      float peak = 0.0f;
      for (float v : t.data()) peak = std::max(peak, std::abs(v));
      doc["levels"].push_back({{"level", level},
                               {"file", "p" + std::to_string(level) + ".pft"},
                               {"dims", t.dims()},
                               {"l2_norm", l2_norm(t)},
                               {"max_abs", peak}});
    }
    doc["timing_ms"] = trace.timing_ms;
    doc["params_from_weights"] = w.param_count();
    doc["params_analytic"] = analytic.total_params();
    doc["params_delta_vs_fpn"] =
        analytic.total_params() - count_params(baseline).total_params();
    doc["params_per_module"] = json::object();
    for (const CostEntry& e : analytic.entries) {
      doc["params_per_module"][e.module] =
          doc["params_per_module"].value(e.module, std::uint64_t{0}) +
          e.params();
    }
    if (base_ok) doc["macs_analytic"] = analytic.total_macs();
    write_text(
        report.empty() ? (fs::path(output) / "report.json").string() : report,
        doc.dump(2) + "\n");
    return kExitOk;
  }

  int code = kExitOk;
};

struct CostCmd {
  std::uint64_t n = 1, h = 1, w = 1, c = 256;
  std::string format = "table";

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "cost", "attention MACs of the vit, sdp and global layouts");
    // --h is a block height here, so help is only reachable as --help.
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--n", n, "number of blocks")->required();
    cmd->add_option("--h", h, "block height")->required();
    cmd->add_option("--w", w, "block width")->required();
    cmd->add_option("--c", c, "channels")->capture_default_str();
    cmd->add_option("--format", format, "table, json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    const CostModel model{n, h, w, c};
    model.validate();
    if (format == "json") {
      std::cout << attention_cost_json(model) << "\n";
    } else if (format == "csv") {
      std::cout << attention_cost_csv(model);
    } else {
      std::cout << attention_cost_table(model);
    }
    return kExitOk;
  }

  int code = kExitOk;
};

struct ParamsCmd {
  std::string in_channels = "256,512,1024,2048";
  std::string base;
  std::string format = "table";
  ConfigFlags flags;

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "params", "analytic parameter and MAC counts per module and level");
    flags.add_to(cmd);
    cmd->add_option("--in-channels", in_channels,
                    "backbone channels of levels 2..5")
        ->capture_default_str();
    cmd->add_option("--base", base, "level-2 extents <h>x<w> for MACs");
    cmd->add_option("--format", format, "table, json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->callback([this] { code = run(); });
  }

  int run() const {
    PyramidConfig config = flags.config();
    std::stringstream ss(in_channels);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
      if (i == kNumLevels) break;
      try {
        config.in_channels[i++] = std::stoull(item);
      } catch (const std::logic_error&) {
        i = kNumLevels + 1;
      }
    }
    if (i != kNumLevels || std::getline(ss, item, ',')) {
      throw CLI::ValidationError("--in-channels",
                                 "expected four comma-separated counts");
    }
    std::optional<std::pair<std::size_t, std::size_t>> extent;
    if (!base.empty()) extent = parse_pair(base, 'x', "--base");
    const OpCostReport report = count_params(config, extent);
    if (format == "json") {
      std::cout << report.to_json() << "\n";
    } else if (format == "csv") {
      std::cout << report.to_csv();
    } else {
      std::cout << report.to_table();
    }
    return kExitOk;
  }

  int code = kExitOk;
};

struct SynthCmd {
  std::string output;
  std::size_t size = 100;
  std::size_t base = 64;
  std::string channels = "256";
  std::uint64_t seed = 0;
  std::size_t batch = 1;
  CLI::App* scene_cmd = nullptr;
  CLI::App* pyramid_cmd = nullptr;

  void add_to(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("synth", "write synthetic inputs")
                        ->require_subcommand(1);
    scene_cmd = cmd->add_subcommand("scene", "blob-on-ramp test image (PGM)");
    scene_cmd->add_option("-o,--output", output, "PGM path")->required();
    scene_cmd->add_option("--size", size, "image side")->capture_default_str();
    scene_cmd->callback([this] { code = run_scene(); });

    pyramid_cmd = cmd->add_subcommand("pyramid", "random c2..c5 directory");
    pyramid_cmd->add_option("-o,--output", output, "directory")->required();
    pyramid_cmd->add_option("--base", base, "level-2 side (multiple of 8)")
        ->capture_default_str();
    pyramid_cmd
        ->add_option("--channels", channels,
                     "one count, or four comma-separated counts")
        ->capture_default_str();
    pyramid_cmd->add_option("--batch", batch)->capture_default_str();
    pyramid_cmd->add_option("--seed", seed)->capture_default_str();
    pyramid_cmd->callback([this] { code = run_pyramid(); });
  }

  int run_scene() const {
    BlobScene scene;
    scene.size = size;
    write_pgm(output, render_scene(scene));
    return kExitOk;
  }

  int run_pyramid() const {
    std::array<std::size_t, kNumLevels> counts{};
    std::vector<std::size_t> parsed;
    std::stringstream ss(channels);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        parsed.push_back(std::stoull(item));
      } catch (const std::logic_error&) {
        parsed.clear();
        break;
      }
    }
    if (parsed.size() == 1) parsed.assign(kNumLevels, parsed[0]);
    if (parsed.size() != kNumLevels) {
      throw CLI::ValidationError("--channels", "expected one or four counts");
    }
    std::copy(parsed.begin(), parsed.end(), counts.begin());
    write_pyramid_dir(output, random_pyramid(batch, counts, base, base, seed),
                      "c");
    return kExitOk;
  }

  int code = kExitOk;
};

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

int run(int argc, char** argv) {
  CLI::App app{"HS-FPN feature pyramid toolkit", "hsfpn"};
  app.require_subcommand(1);
  FilterCmd filter;
  SweepCmd sweep;
  ForwardCmd forward;
  CostCmd cost;
  ParamsCmd params;
  SynthCmd synth;
  filter.add_to(app);
  sweep.add_to(app);
  forward.add_to(app);
  cost.add_to(app);
  params.add_to(app);
  synth.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << one_line(e.what()) << "\n";
    return kExitDegenerate;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << one_line(e.what()) << "\n";
    return kExitError;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << one_line(e.what()) << "\n";
    return kExitError;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << one_line(e.what()) << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kExitError;
  }
  for (int code : {filter.code, sweep.code, forward.code, cost.code,
                   params.code, synth.code}) {
    if (code != kExitOk) return code;
  }
  return kExitOk;
}

}  // namespace
}  // namespace hsfpn

int main(int argc, char** argv) { return hsfpn::run(argc, argv); }
