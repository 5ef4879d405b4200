// Copyright 2026 The barrierfree Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "barrierfree/error.hpp"
#include "cli.hpp"

namespace barrierfree::cli {
namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& rel) {
  return std::string(BARRIERFREE_FIXTURES) + "/" + rel;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("barrierfree_cli_" + name);
  fs::remove_all(p);
  return p;
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "barrierfree");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

TEST(Digest, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(config_digest(nlohmann::json::parse(R"({"b":1,"a":2})")),
            config_digest(nlohmann::json::parse(R"({"a":2,"b":1})")));
}

TEST(Parsing, NListAndImageSize) {
  EXPECT_EQ(parse_n_list("1..5"), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_n_list("1,2,4"), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(parse_n_list("3"), (std::vector<int>{3}));
  EXPECT_THROW(parse_n_list("5..1"), ConfigError);
  EXPECT_THROW(parse_n_list("0"), ConfigError);
  EXPECT_THROW(parse_n_list("a"), ConfigError);
  EXPECT_EQ(parse_image_size("640x512"), (std::pair<double, double>{640, 512}));
  EXPECT_THROW(parse_image_size("640"), ConfigError);
}

TEST(Cli, UnknownCommandIsUsageError) {
  EXPECT_NE(call({"teleport"}), 0);
  EXPECT_NE(call({}), 0);
}

TEST(Cli, SimRunIsByteDeterministic) {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  ASSERT_EQ(call({"sim", "run", "--seed", "7", "--ablate-n", "1..2", "--out", a.string()}), 0);
  ASSERT_EQ(call({"sim", "run", "--seed", "7", "--ablate-n", "1..2", "--out", b.string()}), 0);
  for (const char* name : {"metrics.csv", "ablation_report.csv", "events.jsonl", "commands.jsonl",
                           "controller.json", "scenario.json", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "sim run");
  EXPECT_EQ(manifest.at("config_digest").get<std::string>().rfind("sha256:", 0), 0u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, SimEventsReplayToSameCommands) {
  const auto sim = scratch("replay_sim"), rep = scratch("replay_out");
  ASSERT_EQ(call({"sim", "run", "--seed", "3", "--out", sim.string()}), 0);
  ASSERT_EQ(call({"controller", "replay", "--events", (sim / "events.jsonl").string(), "--config",
                  (sim / "controller.json").string(), "--out", rep.string()}),
            0);
  EXPECT_EQ(slurp(sim / "commands.jsonl"), slurp(rep / "commands.jsonl"));
  fs::remove_all(sim);
  fs::remove_all(rep);
}

TEST(Cli, ReplayFixtureSummary) {
  const auto out = scratch("replay_fixture");
  ASSERT_EQ(call({"controller", "replay", "--events", fixture("events/blindstick.jsonl"),
                  "--config", fixture("controller.json"), "--out", out.string()}),
            0);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_EQ(summary.at("total_extension_s"), 8);
  EXPECT_NE(call({"controller", "replay", "--events", fixture("events/out_of_order.jsonl"),
                  "--config", fixture("controller.json"), "--out", out.string()}),
            0);
  fs::remove_all(out);
}

TEST(Cli, DatasetCommands) {
  const auto out = scratch("dataset");
  ASSERT_EQ(call({"dataset", "stats", "--labels", fixture("labels"), "--names",
                  fixture("classes.names"), "--out", out.string()}),
            0);
  EXPECT_TRUE(fs::exists(out / "histogram.csv"));
  const auto stats = nlohmann::json::parse(slurp(out / "stats.json"));
  EXPECT_DOUBLE_EQ(stats.at("imbalance_ratio").get<double>(), 3.0);

  ASSERT_EQ(call({"dataset", "split", "--labels", fixture("labels"), "--names",
                  fixture("classes.names"), "--seed", "1", "--out", out.string()}),
            0);
  EXPECT_FALSE(slurp(out / "train.txt").empty());

  ASSERT_EQ(call({"dataset", "eval-ap", "--labels", fixture("labels"), "--names",
                  fixture("classes.names"), "--predictions", fixture("predictions_perfect.jsonl"),
                  "--out", out.string()}),
            0);
  EXPECT_NE(slurp(out / "eval.csv").find("1.000000,1.000000"), std::string::npos);

  EXPECT_NE(call({"dataset", "stats", "--labels", fixture("labels_bad"), "--names",
                  fixture("classes.names"), "--out", out.string()}),
            0);
  fs::remove_all(out);
}

TEST(Cli, SelfcheckWritesReport) {
  const auto out = scratch("selfcheck");
  ASSERT_EQ(call({"kernels", "selfcheck", "--cases", "20", "--out", out.string()}), 0);
  EXPECT_NE(slurp(out / "selfcheck.txt").find("PASS"), std::string::npos);
  EXPECT_EQ(call({"kernels", "selfcheck", "--cases", "20", "--inject-fault", "triplet-bypass-identity",
                  "--out", out.string()}),
            1);
  fs::remove_all(out);
}

}  // namespace
}  // namespace barrierfree::cli
