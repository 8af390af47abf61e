// Copyright (c) 2026, The cropmix Authors. All rights reserved.
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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cropmix/cli.hpp"
#include "test_util.hpp"

using namespace cropmix;
using namespace cropmix::cli;
using cropmix::testutil::TempDir;
using cropmix::testutil::write_png_sources;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class Cmd> Run run(Cmd cmd, const Invocation& inv) {
  std::ostringstream out, err;
  const int code = cmd(inv, out, err);
  return {code, out.str(), err.str()};
}

std::string write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

class CliTest : public ::testing::Test {
protected:
  CliTest() : dir_("cli") {
    write_png_sources(dir_.path() / "in", 5, 48, 40);
    config_ = write_config(dir_.path(), "c.cfg", "resolution = 24\n");
  }
  Invocation sample_inv(const std::string& out, std::size_t count, std::size_t workers) const {
    Invocation inv;
    inv.input = (dir_.path() / "in").string();
    inv.output = (dir_.path() / out).string();
    inv.config = config_;
    inv.seed = 2026;
    inv.count = count;
    inv.workers = workers;
    return inv;
  }
  TempDir dir_;
  std::string config_;
};

} // namespace

TEST_F(CliTest, CountZeroWritesNothing) {
  const auto r = run(cmd_sample, sample_inv("zero", 0, 2));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(!fs::exists(dir_.path() / "zero") || fs::is_empty(dir_.path() / "zero"));
  EXPECT_EQ(nlohmann::json::parse(r.out)["samples"], 0);
}

TEST_F(CliTest, SampleIsDeterministicAcrossRunsAndWorkers) {
  ASSERT_EQ(run(cmd_sample, sample_inv("a", 40, 1)).code, kExitOk);
  ASSERT_EQ(run(cmd_sample, sample_inv("b", 40, 1)).code, kExitOk);
  ASSERT_EQ(run(cmd_sample, sample_inv("c", 40, 8)).code, kExitOk);
  const auto a = read_tree(dir_.path() / "a");
  EXPECT_EQ(a.size(), 80u);
  EXPECT_EQ(a, read_tree(dir_.path() / "b"));
  EXPECT_EQ(a, read_tree(dir_.path() / "c"));
}

TEST_F(CliTest, SampleCyclesSources) {
  ASSERT_EQ(run(cmd_sample, sample_inv("cyc", 7, 3)).code, kExitOk);
  const auto m5 = load_manifest(dir_.path() / "cyc" / "sample_5.json");
  const auto m0 = load_manifest(dir_.path() / "cyc" / "sample_0.json");
  EXPECT_EQ(m5.source, "img_000.png");
  EXPECT_EQ(m0.source, m5.source);
  EXPECT_EQ(load_manifest(dir_.path() / "cyc" / "sample_6.json").source, "img_001.png");
}

TEST_F(CliTest, SampleWithPng) {
  auto inv = sample_inv("png", 3, 2);
  inv.formats = "png,raw";
  ASSERT_EQ(run(cmd_sample, inv).code, kExitOk);
  EXPECT_EQ(read_tree(dir_.path() / "png").size(), 9u);
}

TEST_F(CliTest, ErrorsExitOne) {
  auto inv = sample_inv("err", 3, 1);
  inv.config = (dir_.path() / "missing.cfg").string();
  auto r = run(cmd_sample, inv);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);

  inv = sample_inv("err", 3, 1);
  inv.config = write_config(dir_.path(), "bad.cfg", "colour = 3\n");
  EXPECT_EQ(run(cmd_sample, inv).code, kExitError);

  inv = sample_inv("err", 3, 1);
  inv.input.clear();
  EXPECT_EQ(run(cmd_sample, inv).code, kExitError);

  inv = sample_inv("err", 3, 1);
  inv.formats = "gif";
  EXPECT_EQ(run(cmd_sample, inv).code, kExitError);
}

TEST_F(CliTest, ReplayMatchesThenDetectsCorruption) {
  ASSERT_EQ(run(cmd_sample, sample_inv("rp", 12, 4)).code, kExitOk);
  auto r = run(cmd_replay, sample_inv("rp", 0, 4));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["checked"], 12);
  EXPECT_EQ(report["matched"], 12);

  const auto victim = dir_.path() / "rp" / "sample_7.cmtx";
  {
    std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(100);
    char c = 0;
    f.read(&c, 1);
    c = static_cast<char>(c ^ 0x01);
    f.seekp(100);
    f.write(&c, 1);
  }
  r = run(cmd_replay, sample_inv("rp", 0, 4));
  EXPECT_EQ(r.code, kExitMismatch);
  EXPECT_NE(r.err.find("sample_7"), std::string::npos);
  report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["first_mismatch"], 7);
  EXPECT_EQ(report["matched"], 11);
}

TEST_F(CliTest, ReplayRejectsOtherConfig) {
  ASSERT_EQ(run(cmd_sample, sample_inv("rc", 2, 1)).code, kExitOk);
  auto inv = sample_inv("rc", 0, 1);
  inv.config = write_config(dir_.path(), "other.cfg", "resolution = 25\n");
  EXPECT_EQ(run(cmd_replay, inv).code, kExitError);
}

TEST_F(CliTest, ReplayThousandSamples) {
  const auto cfg = write_config(dir_.path(), "tiny.cfg", "resolution = 8\n");
  auto inv = sample_inv("k", 1000, default_workers());
  inv.config = cfg;
  ASSERT_EQ(run(cmd_sample, inv).code, kExitOk);
  const auto r = run(cmd_replay, inv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["matched"], 1000);
  EXPECT_EQ(report["samples"].size(), 1000u);
}

TEST_F(CliTest, StatsLambdaVarianceForPairs) {
  Invocation inv;
  inv.config = write_config(dir_.path(), "n2.cfg", "num_crops = 2\n");
  inv.count = 100000;
  inv.seed = 5;
  const auto r = run(cmd_stats, inv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rep = nlohmann::json::parse(r.out);
  const double expected = 1.0 / (4.0 * 1.4);
  EXPECT_NEAR(rep["lambda"]["expected_variance"].get<double>(), expected, 1e-12);
  EXPECT_NEAR(rep["lambda"]["variance"].get<double>(), expected, 0.05 * expected);
  EXPECT_NEAR(rep["lambda"]["mean"].get<double>(), 0.5, 0.01);
}

TEST_F(CliTest, StatsCutmixIsUniform) {
  Invocation inv;
  inv.config = write_config(dir_.path(), "cm.cfg", "num_crops = 2\nmix_mode = \"cutmix\"\n");
  inv.count = 100000;
  const auto rep = nlohmann::json::parse(run(cmd_stats, inv).out);
  EXPECT_NEAR(rep["lambda"]["mean"].get<double>(), 0.5, 0.01);
  EXPECT_NEAR(rep["lambda"]["variance"].get<double>(), 1.0 / 12, 0.05 / 12);
  EXPECT_FALSE(rep["cutmix_effective_fraction"].is_null());
}

TEST_F(CliTest, StatsNumCropsHistogram) {
  Invocation inv;
  inv.config = config_;
  inv.count = 30000;
  inv.workers = 4;
  const auto r = run(cmd_stats, inv);
  const auto rep = nlohmann::json::parse(r.out);
  for (const char* n : {"2", "3", "4"}) {
    EXPECT_NEAR(rep["num_crops_histogram"][n].get<double>(), 10000, 400) << n;
  }
  inv.workers = 1;
  EXPECT_EQ(run(cmd_stats, inv).out, r.out);
}

TEST_F(CliTest, StatsUsesFirstSourceShape) {
  Invocation inv;
  inv.config = config_;
  inv.input = (dir_.path() / "in").string();
  inv.count = 10;
  const auto rep = nlohmann::json::parse(run(cmd_stats, inv).out);
  EXPECT_EQ(rep["source_shape"], nlohmann::json({3, 40, 48}));
  inv.count = 0;
  EXPECT_EQ(run(cmd_stats, inv).code, kExitError);
}

TEST_F(CliTest, BenchReportShape) {
  Invocation inv = sample_inv("unused", 20, 2);
  inv.mode = "rrc";
  const auto r = run(cmd_bench, inv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rep = nlohmann::json::parse(r.out);
  for (const char* side : {"baseline", "candidate"}) {
    double total = 0.0;
    for (const auto& [k, v] : rep[side]["stage_share_percent"].items()) total += v.get<double>();
    EXPECT_NEAR(total, 100.0, 1.0) << side;
    EXPECT_GT(rep[side]["latency_mean_ms"].get<double>(), 0.0);
    EXPECT_LE(rep[side]["latency_p50_ms"].get<double>(), rep[side]["latency_p99_ms"].get<double>());
  }
  EXPECT_GT(rep["overhead_ratio"].get<double>(), 0.0);

  inv.count = 0;
  EXPECT_EQ(run(cmd_bench, inv).code, kExitError);
  inv.count = 5;
  inv.mode = "fast";
  EXPECT_EQ(run(cmd_bench, inv).code, kExitError);
}
