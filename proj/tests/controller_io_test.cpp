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

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "barrierfree/controller_io.hpp"
#include "barrierfree/error.hpp"

namespace barrierfree::control {
namespace {

std::string fixture(const std::string& rel) {
  return std::string(BARRIERFREE_FIXTURES) + "/" + rel;
}

int total_extension(const std::vector<SignalCommand>& cmds) {
  return std::accumulate(cmds.begin(), cmds.end(), 0,
                         [](int acc, const SignalCommand& c) { return acc + c.extend_green_by; });
}

TEST(EventStream, GroupsLinesIntoFrames) {
  std::istringstream in(
      R"({"ts_ms":0,"camera_id":0,"class_id":1,"x_min":1,"y_min":2,"x_max":3,"y_max":4,"confidence":0.9})"
      "\n"
      R"({"ts_ms":0,"camera_id":0,"class_id":4,"x_min":1,"y_min":2,"x_max":3,"y_max":4,"confidence":0.8})"
      "\n\n"
      R"({"ts_ms":363,"camera_id":0})"
      "\n");
  const auto frames = read_event_stream(in, "mem");
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].detections.size(), 2u);
  EXPECT_EQ(frames[1].timestamp_ms, 363);
  EXPECT_TRUE(frames[1].detections.empty());
}

TEST(EventStream, WriteReadRoundTrip) {
  const auto frames = read_event_file(fixture("events/mixed.jsonl"));
  std::ostringstream out;
  write_event_stream(out, frames);
  std::istringstream in(out.str());
  const auto again = read_event_stream(in, "mem");
  ASSERT_EQ(again.size(), frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(again[i].timestamp_ms, frames[i].timestamp_ms);
    ASSERT_EQ(again[i].detections.size(), frames[i].detections.size());
    for (std::size_t j = 0; j < frames[i].detections.size(); ++j) {
      EXPECT_EQ(again[i].detections[j].bbox, frames[i].detections[j].bbox);
      EXPECT_EQ(again[i].detections[j].object_class, frames[i].detections[j].object_class);
      EXPECT_EQ(again[i].detections[j].confidence, frames[i].detections[j].confidence);
    }
  }
}

TEST(EventStream, OutOfOrderNamesTheLine) {
  try {
    read_event_file(fixture("events/out_of_order.jsonl"));
    FAIL() << "expected OrderingError";
  } catch (const OrderingError& e) {
    EXPECT_NE(std::string(e.what()).find("out_of_order.jsonl:4"), std::string::npos) << e.what();
  }
}

TEST(EventStream, MalformedLinesAreParseErrors) {
  const char* bad[] = {
      "not json",
      R"({"ts_ms":0,"camera_id":0,"colour":"red"})",
      R"({"ts_ms":0,"camera_id":0,"class_id":1})",
      R"({"ts_ms":0,"camera_id":0,"class_id":12,"x_min":1,"y_min":2,"x_max":3,"y_max":4,"confidence":0.9})",
      R"({"ts_ms":0,"camera_id":0,"class_id":1,"x_min":3,"y_min":2,"x_max":1,"y_max":4,"confidence":0.9})",
      R"({"ts_ms":0,"camera_id":0,"class_id":1,"x_min":1,"y_min":2,"x_max":3,"y_max":4,"confidence":1.9})",
      R"({"ts_ms":-5,"camera_id":0})",
      R"({"ts_ms":1.5,"camera_id":0})",
  };
  for (const char* line : bad) {
    std::istringstream in(std::string("{\"ts_ms\":0,\"camera_id\":0}\n") + line + "\n");
    try {
      read_event_stream(in, "mem");
      ADD_FAILURE() << "accepted: " << line;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("mem:2"), std::string::npos) << e.what();
    }
  }
}

TEST(CommandLog, Format) {
  SignalCommand c;
  c.ts_s = 12;
  c.extend_green_by = 1;
  c.audible_boost = true;
  c.active_group = MobilityGroup::kVisualImpairment;
  EXPECT_EQ(command_line(c),
            R"({"ts_s":12,"extend_green_by":1,"audible_boost":true,"active_group":"visual"})");
  c.active_group.reset();
  c.audible_boost = false;
  EXPECT_EQ(command_line(c),
            R"({"ts_s":12,"extend_green_by":1,"audible_boost":false,"active_group":null})");
}

TEST(ConfigJson, RoundTripAndDefaults) {
  const auto cfg = load_controller_config(fixture("controller.json"));
  EXPECT_EQ(cfg.base_green_s, 10);
  EXPECT_EQ(cfg.validation_frames, 2);
  ASSERT_EQ(cfg.zones.size(), 1u);
  const auto again = controller_config_from_json(controller_config_to_json(cfg));
  EXPECT_EQ(controller_config_to_json(again), controller_config_to_json(cfg));

  const auto minimal = controller_config_from_json(
      nlohmann::json::parse(R"({"zones":{"3":[[0,0],[1,0],[1,1]]}})"));
  EXPECT_EQ(minimal.max_extension.visual_s, 8);
  EXPECT_DOUBLE_EQ(minimal.frame_interval_ms, 363.4);
  EXPECT_TRUE(minimal.zones.contains(3));
}

TEST(ConfigJson, Rejections) {
  const char* bad[] = {
      R"({"zones":{"0":[[0,0],[1,0],[1,1]]},"bonus":1})",
      R"({"base_green_s":10})",
      R"({"zones":{"0":[[0,0],[1,1],[1,0],[0,1]]}})",
      R"({"zones":{"0":[[0,0],[1,0],[1,1]]},"validation_frames":0})",
      R"({"zones":{"0":[[0,0],[1,0],[1,1]]},"max_extension_s":{"walking":6,"running":2}})",
      R"({"zones":{"x":[[0,0],[1,0],[1,1]]}})",
  };
  for (const char* doc : bad) {
    EXPECT_ANY_THROW(controller_config_from_json(nlohmann::json::parse(doc))) << doc;
  }
  EXPECT_THROW(controller_config_from_json(nlohmann::json::parse(bad[0])), ConfigError);
}

TEST(Replay, FixtureOutcomes) {
  const auto cfg = load_controller_config(fixture("controller.json"));
  struct Case {
    const char* file;
    int extension;
    bool boost;
  };
  const Case cases[] = {{"events/wheelchair.jsonl", 6, false},
                        {"events/blindstick.jsonl", 8, true},
                        {"events/burden.jsonl", 3, false},
                        {"events/mixed.jsonl", 8, true},
                        {"events/empty.jsonl", 0, false}};
  for (const auto& c : cases) {
    const auto cmds = replay(cfg, read_event_file(fixture(c.file)));
    EXPECT_EQ(total_extension(cmds), c.extension) << c.file;
    const bool boost = std::any_of(cmds.begin(), cmds.end(),
                                   [](const SignalCommand& s) { return s.audible_boost; });
    EXPECT_EQ(boost, c.boost) << c.file;
    ASSERT_FALSE(cmds.empty());
    EXPECT_TRUE(cmds.back().green_ended);
    EXPECT_EQ(cmds.back().ts_s, 10 + c.extension) << c.file;
  }
}

TEST(Replay, Deterministic) {
  const auto cfg = load_controller_config(fixture("controller.json"));
  const auto frames = read_event_file(fixture("events/mixed.jsonl"));
  std::ostringstream a, b;
  write_command_log(a, replay(cfg, frames));
  write_command_log(b, replay(cfg, frames));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Replay, CyclesThroughSeveralGreens) {
  auto cfg = load_controller_config(fixture("controller.json"));
  cfg.cycle_s = 19;
  const auto cmds = replay(cfg, read_event_file(fixture("events/wheelchair.jsonl")));
  const auto ends = std::count_if(cmds.begin(), cmds.end(),
                                  [](const SignalCommand& c) { return c.green_ended; });
  // Frames run to 20 s, so the second green at 19 s also sees the wheelchair.
  EXPECT_EQ(ends, 2);
  EXPECT_EQ(total_extension(cmds), 12);
  EXPECT_EQ(std::count_if(cmds.begin(), cmds.end(),
                          [](const SignalCommand& c) { return c.ts_s == 19; }),
            0);
}

}  // namespace
}  // namespace barrierfree::control
