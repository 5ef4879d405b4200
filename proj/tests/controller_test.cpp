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

#include <cmath>
#include <functional>
#include <random>

#include "barrierfree/controller.hpp"
#include "barrierfree/error.hpp"

namespace barrierfree::control {
namespace {

using detection::Detection;
using detection::ObjectClass;

ControllerConfig test_config(int validation_frames = 2) {
  ControllerConfig c;
  c.validation_frames = validation_frames;
  c.zones.emplace(0, geometry::rectangle_zone(0, 300, 640, 512, "crossing"));
  return c;
}

Detection det(ObjectClass cls, std::int64_t ts, double x = 100, double conf = 0.9) {
  Detection d;
  d.object_class = cls;
  d.bbox = detection::BoundingBox(x, 250, x + 60, 400);
  d.confidence = conf;
  d.timestamp_ms = ts;
  return d;
}

using FrameFn = std::function<std::vector<Detection>(std::int64_t ts_ms)>;

struct GreenRun {
  std::vector<SignalCommand> commands;
  int extension = 0;
  std::int64_t ended_at = -1;
  bool boost_seen = false;
};

// Green from t = 0; frames every 363.4 ms; ticks each second.
GreenRun run_green(SignalController& ctl, const FrameFn& frames, int max_s = 60) {
  GreenRun out;
  ctl.begin_green(0);
  int k = 0;
  for (std::int64_t s = 1; s <= max_s; ++s) {
    for (;;) {
      const auto ts = static_cast<std::int64_t>(std::llround(k * 363.4));
      if (ts > s * 1000) break;
      FrameDetections f;
      f.timestamp_ms = ts;
      f.detections = frames(ts);
      ctl.ingest_frame(f);
      ++k;
    }
    const auto cmd = ctl.tick(s);
    out.commands.push_back(cmd);
    out.extension += cmd.extend_green_by;
    out.boost_seen = out.boost_seen || cmd.audible_boost;
    if (cmd.green_ended) {
      out.ended_at = s;
      break;
    }
  }
  return out;
}

TEST(PresenceUpdate, StateMachine) {
  PresenceTracker t;
  t = presence_update(t, false, 2);
  EXPECT_FALSE(t.first_seen);
  EXPECT_EQ(t.consecutive_misses, 0);
  t = presence_update(t, true, 2);
  EXPECT_TRUE(t.present());
  t = presence_update(t, false, 2);
  EXPECT_TRUE(t.present());
  EXPECT_EQ(t.consecutive_misses, 1);
  t = presence_update(t, true, 2);
  EXPECT_EQ(t.consecutive_misses, 0);
  t = presence_update(t, false, 2);
  t = presence_update(t, false, 2);
  EXPECT_TRUE(t.confirmed_absent);
  EXPECT_FALSE(t.present());
  // Re-arm.
  t = presence_update(t, true, 2);
  EXPECT_TRUE(t.present());
  EXPECT_EQ(t.consecutive_misses, 0);
}

TEST(PresenceUpdate, NeverConfirmDepthKeepsPresence) {
  PresenceTracker t = presence_update({}, true, kNeverConfirm);
  for (int i = 0; i < 1000; ++i) t = presence_update(t, false, kNeverConfirm);
  EXPECT_TRUE(t.present());
}

TEST(PresenceUpdate, ConfirmsAfterExactlyNMisses) {
  for (int n = 1; n <= 6; ++n) {
    PresenceTracker t = presence_update({}, true, n);
    for (int i = 1; i < n; ++i) {
      t = presence_update(t, false, n);
      EXPECT_TRUE(t.present()) << n;
    }
    t = presence_update(t, false, n);
    EXPECT_FALSE(t.present()) << n;
  }
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(test_config().validate());
  auto c = test_config();
  c.validation_frames = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = test_config();
  c.confidence_threshold = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = test_config();
  c.cycle_s = 18;
  EXPECT_THROW(c.validate(), ConfigError);
  c.cycle_s = 19;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.max_cap(), 8);
  EXPECT_THROW(c.cap(MobilityGroup::kUnrestricted), DomainError);
  EXPECT_THROW(tracker_slot(MobilityGroup::kUnrestricted), DomainError);
}

TEST(Controller, NoRestrictedPedestrianEndsAtBaseGreen) {
  SignalController ctl(test_config());
  const auto run = run_green(ctl, [](std::int64_t ts) {
    return std::vector<Detection>{det(ObjectClass::kPersonWithoutMobilityRestrictions, ts)};
  });
  EXPECT_EQ(run.extension, 0);
  EXPECT_EQ(run.ended_at, 10);
  for (const auto& c : run.commands) EXPECT_FALSE(c.active_group.has_value());
}

TEST(Controller, PersistentPresenceReachesEachCap) {
  const std::vector<std::pair<ObjectClass, int>> cases = {
      {ObjectClass::kPersonWithWheelchair, 6},
      {ObjectClass::kPersonWithBlindstick, 8},
      {ObjectClass::kPersonWithLuggage, 3},
  };
  for (const auto& [cls, cap] : cases) {
    SignalController ctl(test_config());
    const auto run = run_green(ctl, [cls = cls](std::int64_t ts) {
      return std::vector<Detection>{det(cls, ts)};
    });
    EXPECT_EQ(run.extension, cap);
    EXPECT_EQ(run.ended_at, 10 + cap);
    EXPECT_EQ(run.boost_seen, cls == ObjectClass::kPersonWithBlindstick);
  }
}

TEST(Controller, HighestPriorityGroupGovernsCap) {
  SignalController ctl(test_config());
  const auto run = run_green(ctl, [](std::int64_t ts) {
    return std::vector<Detection>{det(ObjectClass::kPersonWithLuggage, ts, 50),
                                  det(ObjectClass::kPersonWithBlindstick, ts, 300),
                                  det(ObjectClass::kPersonWithWheelchair, ts, 500)};
  });
  EXPECT_EQ(run.extension, 8);
  EXPECT_TRUE(run.boost_seen);
  EXPECT_EQ(ctl.state().granted_by_group[tracker_slot(MobilityGroup::kVisualImpairment)], 8);
}

TEST(Controller, ConfirmedAbsenceStopsExtension) {
  SignalController ctl(test_config());
  // Walking pedestrian leaves the zone at 11.5 s.
  const auto run = run_green(ctl, [](std::int64_t ts) {
    if (ts < 11500) return std::vector<Detection>{det(ObjectClass::kPersonWithWheelchair, ts)};
    return std::vector<Detection>{};
  });
  EXPECT_EQ(run.extension, 2);
  EXPECT_EQ(run.ended_at, 12);
  const auto& t = ctl.state().trackers[tracker_slot(MobilityGroup::kWalkingImpairment)];
  EXPECT_TRUE(t.confirmed_absent);
  EXPECT_GE(t.confirmed_at_ms, 11500);
}

TEST(Controller, IgnoresLowConfidenceAndOutOfZone) {
  SignalController ctl(test_config());
  const auto run = run_green(ctl, [](std::int64_t ts) {
    auto low = det(ObjectClass::kPersonWithWheelchair, ts, 100, 0.3);
    auto out = det(ObjectClass::kPersonWithWheelchair, ts, 700);
    return std::vector<Detection>{low, out};
  });
  EXPECT_EQ(run.extension, 0);
  EXPECT_EQ(run.ended_at, 10);
}

TEST(Controller, RedPhaseFramesDoNotArm) {
  SignalController ctl(test_config());
  FrameDetections f;
  f.timestamp_ms = 0;
  f.detections = {det(ObjectClass::kPersonWithWheelchair, 0)};
  ctl.ingest_frame(f);
  EXPECT_EQ(ctl.state().stats.red_frames, 1);
  EXPECT_FALSE(ctl.state().trackers[0].first_seen);
  const auto cmd = ctl.tick(1);
  EXPECT_EQ(cmd.extend_green_by, 0);
  EXPECT_FALSE(cmd.active_group.has_value());
}

TEST(Controller, OrderingAndCameraErrors) {
  SignalController ctl(test_config());
  ctl.begin_green(0);
  FrameDetections f;
  f.timestamp_ms = 500;
  ctl.ingest_frame(f);
  f.timestamp_ms = 400;
  EXPECT_THROW(ctl.ingest_frame(f), OrderingError);
  f.timestamp_ms = 600;
  f.camera_id = 9;
  EXPECT_THROW(ctl.ingest_frame(f), ConfigError);
  ctl.tick(1);
  EXPECT_THROW(ctl.tick(1), OrderingError);
}

TEST(Controller, RandomStreamsRespectCapsAndNeverRevoke) {
  std::mt19937_64 rng(21);
  const std::array<ObjectClass, 5> pool = {
      ObjectClass::kPersonWithWheelchair, ObjectClass::kPersonWithBlindstick,
      ObjectClass::kPersonWithLuggage, ObjectClass::kCar,
      ObjectClass::kPersonWithoutMobilityRestrictions};
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    SignalController ctl(test_config(n));
    std::bernoulli_distribution present(0.6);
    std::int64_t last_end = -1;
    int max_allowed = 0;
    const auto run = run_green(ctl, [&](std::int64_t ts) {
      std::vector<Detection> out;
      for (ObjectClass c : pool) {
        if (present(rng)) {
          out.push_back(det(c, ts, static_cast<double>(rng() % 600)));
          if (detection::is_restricted(detection::group_of(c))) {
            max_allowed = std::max(max_allowed,
                                   detection::max_extension_seconds(detection::group_of(c)));
          }
        }
      }
      const auto end = ctl.scheduled_green_end_s();
      EXPECT_GE(end, last_end);
      last_end = end;
      return out;
    });
    ASSERT_GE(run.ended_at, 10);
    EXPECT_LE(run.extension, 8);
    EXPECT_LE(run.extension, max_allowed);
    EXPECT_EQ(run.ended_at, 10 + run.extension);
    for (const auto& c : run.commands) {
      EXPECT_TRUE(c.extend_green_by == 0 || c.extend_green_by == 1);
      if (c.audible_boost) EXPECT_EQ(c.active_group, MobilityGroup::kVisualImpairment);
    }
  }
}

}  // namespace
}  // namespace barrierfree::control
