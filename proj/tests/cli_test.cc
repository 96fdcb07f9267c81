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
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hsfpn/frequency.h"
#include "hsfpn/pgm.h"
#include "hsfpn/pyramid_io.h"
#include "hsfpn/tensor_io.h"
#include "json.hpp"

namespace hsfpn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ =
        fs::temp_directory_path() / (std::string("hsfpn_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(HSFPN_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("cost --n 1 --h 2").code, 1);
  const Result r = run("filter in.pgm -o out.pgm --cut 3by4");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_EQ(run("filter a.pgm -o b.pgm --alpha 0.1 --cut 2x2").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, CostMultipliers) {
  const Result r = run("cost --n 16 --h 8 --w 8 --c 32 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["rows"][0]["multiplier"], "1");
  EXPECT_EQ(doc["rows"][1]["multiplier"], "hw/n");
  EXPECT_EQ(doc["rows"][2]["multiplier"], "hw");
  EXPECT_EQ(doc["rows"][1]["multiplier_num"], 4);
  EXPECT_EQ(doc["rows"][2]["multiplier_num"], 64);

  const json twice =
      json::parse(run("cost --n 16 --h 8 --w 8 --c 64 --format json").out);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(twice["rows"][i]["macs"].get<std::uint64_t>(),
              2 * doc["rows"][i]["macs"].get<std::uint64_t>());
  }
  const json one = json::parse(run("cost --n 1 --h 5 --w 3 --format json").out);
  EXPECT_EQ(one["rows"][1]["macs"], one["rows"][2]["macs"]);
  const Result table = run("cost --n 4 --h 2 --w 2");
  EXPECT_NE(table.out.find("hw/n"), std::string::npos);
  EXPECT_EQ(run("cost --n 0 --h 2 --w 2").code, 3);
}

TEST_F(CliTest, ParamsReport) {
  const Result r = run("params --no-bias --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  std::uint64_t fuse = 0, proj = 0;
  for (const auto& e : doc["entries"]) {
    if (e["module"] == "hfp.fuse") fuse += e["params"].get<std::uint64_t>();
    if (e["module"] == "sdp.projections") {
      proj += e["params"].get<std::uint64_t>();
    }
  }
  EXPECT_EQ(fuse, 2359296u);
  EXPECT_EQ(proj, 589824u);
  EXPECT_EQ(run("params --base 60x64").code, 3);
  EXPECT_EQ(run("params --in-channels 1,2,3").code, 1);
}

TEST_F(CliTest, FilterIdentityAndBlackout) {
  ASSERT_EQ(run("synth scene -o " + path("scene.pgm")).code, 0);
  const Tensor scene = read_pgm(path("scene.pgm"));

  Result r = run("filter " + path("scene.pgm") + " -o " + path("same.pgm") +
                 " --alpha 0");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(max_abs_diff(read_pgm(path("same.pgm")), scene), 1.0 / 255 + 1e-6);
  const json stats = json::parse(slurp(path("same.pgm.json")));
  EXPECT_NEAR(stats["scr_before"].get<double>(),
              stats["scr_after"].get<double>(), 1e-3);

  r = run("filter " + path("scene.pgm") + " -o " + path("zero.pgm") +
          " --alpha 1");
  // An all-zero image has a constant background.
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(json::parse(slurp(path("zero.pgm.json")))["degenerate"]);
  const Tensor zero = read_pgm(path("zero.pgm"));
  for (float v : zero.data()) EXPECT_EQ(v, 0.0f);

  r = run("filter " + path("scene.pgm") + " -o " + path("gray.pgm") +
          " --alpha 1 --recenter --stats " + path("gray.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(path("gray.json")));
  const Tensor gray = read_pgm(path("gray.pgm"));
  for (float v : gray.data()) {
    EXPECT_EQ(v, 128.0f / 255.0f);
  }
}

TEST_F(CliTest, FilterCutAndScr) {
  ASSERT_EQ(run("synth scene -o " + path("scene.pgm")).code, 0);
  const Result r = run("filter " + path("scene.pgm") + " -o " +
                       path("cut.pgm") + " --cut 5x5 --target-center 50,50");
  ASSERT_EQ(r.code, 0) << r.err;
  const json stats = json::parse(slurp(path("cut.pgm.json")));
  EXPECT_EQ(stats["cut"], json({5, 5}));
  EXPECT_GT(stats["scr_after"].get<double>(),
            stats["scr_before"].get<double>());
}

TEST_F(CliTest, FilterRejectsBadInput) {
  const std::string bad = "P5\n4 4\n300\n";
  write_file_bytes(path("bad.pgm"),
                   std::vector<std::uint8_t>(bad.begin(), bad.end()));
  const Result r = run("filter " + path("bad.pgm") + " -o " + path("o.pgm"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("byte"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_EQ(run("filter " + path("missing.pgm") + " -o " + path("o.pgm")).code,
            3);
}

TEST_F(CliTest, ScrSweep) {
  ASSERT_EQ(run("synth scene -o " + path("scene.pgm")).code, 0);
  const std::string args =
      "scr-sweep " + path("scene.pgm") + " --target-center 50,50 --step 5";
  const Result a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(run(args).out, a.out);

  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "cut_rows,cut_cols,scr");
  std::vector<double> values;
  std::size_t last_cut = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string rows, cols, value;
    std::getline(cells, rows, ',');
    std::getline(cells, cols, ',');
    std::getline(cells, value, ',');
    EXPECT_EQ(rows, cols);
    if (!values.empty()) EXPECT_GT(std::stoul(rows), last_cut);
    last_cut = std::stoul(rows);
    values.push_back(value == "nan" ? -1.0 : std::stod(value));
  }
  ASSERT_EQ(values.size(), 21u);
  const ScrWindows windows{50, 50, 40, 80};
  EXPECT_NEAR(values[0], scr(read_pgm(path("scene.pgm")), windows), 1e-6);
  const auto peak = std::max_element(values.begin(), values.end());
  EXPECT_NE(peak, values.begin());
  EXPECT_NE(peak, values.end() - 1);
}

TEST_F(CliTest, ForwardModes) {
  ASSERT_EQ(run("synth pyramid -o " + path("in") +
                " --base 32 --channels 8,16,24,32 --seed 3")
                .code,
            0);
  const std::string common = " --channels 16 --k 2 --groups 4 --seed 5";
  Result r = run("forward " + path("in") + " -o " + path("a") + common);
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("forward " + path("in") + " -o " + path("b") + common +
          " --save-weights " + path("w"));
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("forward " + path("in") + " -o " + path("f") + common +
          " --mode fpn");
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("forward " + path("in") + " -o " + path("l") + " --weights " +
          path("w"));
  ASSERT_EQ(r.code, 0) << r.err;

  for (int level = 2; level <= 5; ++level) {
    const std::string file = "p" + std::to_string(level) + ".pft";
    const Tensor a = read_pft(dir_ / "a" / file);
    EXPECT_EQ(slurp(dir_ / "a" / file), slurp(dir_ / "b" / file));
    EXPECT_EQ(slurp(dir_ / "a" / file), slurp(dir_ / "l" / file));
    const Tensor f = read_pft(dir_ / "f" / file);
    EXPECT_EQ(a.dims(), f.dims());
    EXPECT_FALSE(bitwise_equal(a, f));
  }

  const json hs = json::parse(slurp(dir_ / "a" / "report.json"));
  const json fpn = json::parse(slurp(dir_ / "f" / "report.json"));
  EXPECT_EQ(hs["params_from_weights"], hs["params_analytic"]);
  EXPECT_EQ(hs["params_from_weights"].get<std::int64_t>() -
                fpn["params_from_weights"].get<std::int64_t>(),
            hs["params_delta_vs_fpn"].get<std::int64_t>());
  EXPECT_EQ(fpn["params_delta_vs_fpn"], 0);
  ASSERT_EQ(hs["levels"].size(), 4u);
  EXPECT_GT(hs["levels"][0]["l2_norm"].get<double>(), 0.0);
  EXPECT_TRUE(hs["timing_ms"].contains("sdp"));

  EXPECT_EQ(run("forward " + path("in") + " -o " + path("x") + " --weights " +
                path("w") + " --seed 1")
                .code,
            1);
}

TEST_F(CliTest, ForwardNamesBadLevel) {
  ASSERT_EQ(
      run("synth pyramid -o " + path("in") + " --base 16 --channels 8").code,
      0);
  // Replace c3 with a map that breaks the 2x nesting.
  write_pft(dir_ / "in" / "c3.pft", Tensor({1, 8, 7, 8}, 0.5f));
  json manifest = json::parse(slurp(dir_ / "in" / "manifest.json"));
  for (auto& entry : manifest["levels"]) {
    if (entry["level"] == 3) entry["dims"] = {1, 8, 7, 8};
  }
  std::ofstream(dir_ / "in" / "manifest.json") << manifest.dump();
  const Result r = run("forward " + path("in") + " -o " + path("out") +
                       " --channels 8 --k 1 --groups 1");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("level 3"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace hsfpn
