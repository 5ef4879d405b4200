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
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>

#include "barrierfree/detection.hpp"
#include "barrierfree/geometry.hpp"

namespace barrierfree::control {

using detection::FrameDetections;
using detection::MobilityGroup;

// Validation depth that never confirms absence.
inline constexpr int kNeverConfirm = std::numeric_limits<int>::max();

struct GroupCaps {
  int walking_s = 6;
  int visual_s = 8;
  int burden_s = 3;
};

struct ControllerConfig {
  int base_green_s = 10;
  GroupCaps max_extension;
  int validation_frames = 2;
  double confidence_threshold = 0.5;
  std::map<int, geometry::PolygonZone> zones;
  double frame_interval_ms = 363.4;
  // Signal cycle used by replay: a new green starts every cycle_s seconds.
  // 0 runs a single green phase starting at t = 0.
  int cycle_s = 0;

  // Throws ConfigError.
  void validate() const;
  // Throws DomainError for kUnrestricted.
  int cap(MobilityGroup g) const;
  int max_cap() const;
};

struct PresenceTracker {
  MobilityGroup group = MobilityGroup::kWalkingImpairment;
  bool first_seen = false;
  int consecutive_misses = 0;
  bool confirmed_absent = false;
  // Timestamps of the last in-zone detection and of the frame that
  // confirmed absence; -1 when not applicable.
  std::int64_t last_seen_ms = -1;
  std::int64_t confirmed_at_ms = -1;

  bool present() const { return first_seen && !confirmed_absent; }

  friend bool operator==(const PresenceTracker&, const PresenceTracker&) = default;
};

// One frame of evidence for one group. A detection after confirmed absence
// re-arms the tracker.
PresenceTracker presence_update(PresenceTracker tracker, bool detected,
                                int validation_frames);

enum class Phase { kRed, kGreen };

struct ZoneStatistics {
  std::int64_t frames = 0;
  std::int64_t red_frames = 0;
  std::int64_t in_zone_detections = 0;

  friend bool operator==(const ZoneStatistics&, const ZoneStatistics&) = default;
};

struct ControllerState {
  Phase phase = Phase::kRed;
  std::int64_t green_start_s = 0;
  int elapsed_s = 0;
  int granted_extension_s = 0;
  // Seconds granted while each group governed, indexed like `trackers`.
  std::array<int, 3> granted_by_group{};
  // Walking, visual, burden.
  std::array<PresenceTracker, 3> trackers{};
  bool audible_boost = false;
  std::int64_t last_frame_ms = std::numeric_limits<std::int64_t>::min();
  std::int64_t last_tick_s = std::numeric_limits<std::int64_t>::min();
  ZoneStatistics stats;

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

// Index into ControllerState::trackers. Throws DomainError for kUnrestricted.
std::size_t tracker_slot(MobilityGroup g);

struct SignalCommand {
  std::int64_t ts_s = 0;
  int extend_green_by = 0;
  bool audible_boost = false;
  std::optional<MobilityGroup> active_group;
  // Set on the tick at which the green phase ended.
  bool green_ended = false;

  friend bool operator==(const SignalCommand&, const SignalCommand&) = default;
};

// Highest-priority group that has been seen and is not confirmed absent.
std::optional<MobilityGroup> active_group(const ControllerState& state);

// Adaptive pedestrian signal for one crossing.
//
// Frames and ticks must be delivered in timestamp order by a single owner.
// During green, every frame updates one presence tracker per restricted
// group. Ticks arrive on whole-second boundaries; once the base green has
// elapsed, each tick grants one more second while a restricted group is
// present and the governing cap (that of the highest-priority present group)
// has not been reached. Granted seconds are never revoked.
class SignalController {
 public:
  explicit SignalController(ControllerConfig config);

  const ControllerConfig& config() const { return config_; }
  const ControllerState& state() const { return state_; }

  // Starts a green phase at now_s and clears all trackers.
  void begin_green(std::int64_t now_s);

  // Throws ConfigError for an unknown camera and OrderingError when the
  // frame is older than the previous one.
  void ingest_frame(const FrameDetections& frame);

  // Advances to now_s. During red this is a no-op command.
  SignalCommand tick(std::int64_t now_s);

  bool green() const { return state_.phase == Phase::kGreen; }
  // Absolute second at which the current green ends if nothing changes.
  std::int64_t scheduled_green_end_s() const;

 private:
  bool detected_in_zone(const FrameDetections& frame, MobilityGroup g,
                        const geometry::PolygonZone& zone) const;

  ControllerConfig config_;
  ControllerState state_;
};

}  // namespace barrierfree::control
