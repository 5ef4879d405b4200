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
#include "barrierfree/controller.hpp"

#include <algorithm>
#include <string>

#include "barrierfree/error.hpp"

namespace barrierfree::control {

using detection::group_of;
using detection::kRestrictedGroups;

void ControllerConfig::validate() const {
  if (base_green_s < 1) throw ConfigError("base_green_s must be at least 1");
  if (validation_frames < 1) throw ConfigError("validation_frames must be at least 1");
  if (max_extension.walking_s < 0 || max_extension.visual_s < 0 ||
      max_extension.burden_s < 0) {
    throw ConfigError("extension caps must be non-negative");
  }
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw ConfigError("confidence_threshold must lie in [0, 1]");
  }
  if (!(frame_interval_ms > 0.0)) throw ConfigError("frame_interval_ms must be positive");
  if (cycle_s < 0) throw ConfigError("cycle_s must be non-negative");
  if (cycle_s > 0 && cycle_s <= base_green_s + max_cap()) {
    throw ConfigError("cycle_s must exceed base green plus the largest extension cap");
  }
}

int ControllerConfig::cap(MobilityGroup g) const {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return max_extension.walking_s;
    case MobilityGroup::kVisualImpairment: return max_extension.visual_s;
    case MobilityGroup::kMobilityBurden: return max_extension.burden_s;
    case MobilityGroup::kUnrestricted: break;
  }
  throw DomainError("no extension cap for unrestricted pedestrians");
}

int ControllerConfig::max_cap() const {
  return std::max({max_extension.walking_s, max_extension.visual_s,
                   max_extension.burden_s});
}

std::size_t tracker_slot(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return 0;
    case MobilityGroup::kVisualImpairment: return 1;
    case MobilityGroup::kMobilityBurden: return 2;
    case MobilityGroup::kUnrestricted: break;
  }
  throw DomainError("unrestricted pedestrians have no presence tracker");
}

PresenceTracker presence_update(PresenceTracker tracker, bool detected,
                                int validation_frames) {
  if (!tracker.first_seen) {
    if (detected) tracker.first_seen = true;
    return tracker;
  }
  if (detected) {
    tracker.consecutive_misses = 0;
    tracker.confirmed_absent = false;
    return tracker;
  }
  if (tracker.consecutive_misses < kNeverConfirm) ++tracker.consecutive_misses;
  if (tracker.consecutive_misses >= validation_frames) tracker.confirmed_absent = true;
  return tracker;
}

std::optional<MobilityGroup> active_group(const ControllerState& state) {
  // kRestrictedGroups is in priority order.
  for (MobilityGroup g : kRestrictedGroups) {
    if (state.trackers[tracker_slot(g)].present()) return g;
  }
  return std::nullopt;
}

SignalController::SignalController(ControllerConfig config)
    : config_(std::move(config)) {
  config_.validate();
  for (MobilityGroup g : kRestrictedGroups) state_.trackers[tracker_slot(g)].group = g;
}

void SignalController::begin_green(std::int64_t now_s) {
  state_.phase = Phase::kGreen;
  state_.green_start_s = now_s;
  state_.elapsed_s = 0;
  state_.granted_extension_s = 0;
  state_.granted_by_group = {};
  state_.audible_boost = false;
  for (MobilityGroup g : kRestrictedGroups) {
    state_.trackers[tracker_slot(g)] = PresenceTracker{.group = g};
  }
}

bool SignalController::detected_in_zone(const FrameDetections& frame,
                                        MobilityGroup g,
                                        const geometry::PolygonZone& zone) const {
  return std::any_of(frame.detections.begin(), frame.detections.end(),
                     [&](const detection::Detection& d) {
                       return d.confidence >= config_.confidence_threshold &&
                              group_of(d.object_class) == g &&
                              geometry::contains(zone, detection::anchor_point(d.bbox));
                     });
}

void SignalController::ingest_frame(const FrameDetections& frame) {
  if (frame.timestamp_ms < state_.last_frame_ms) {
    throw OrderingError("frame at " + std::to_string(frame.timestamp_ms) +
                        " ms arrived after frame at " +
                        std::to_string(state_.last_frame_ms) + " ms");
  }
  const auto zone_it = config_.zones.find(frame.camera_id);
  if (zone_it == config_.zones.end()) {
    throw ConfigError("no crossing zone configured for camera " +
                      std::to_string(frame.camera_id));
  }
  frame.validate();
  const auto& zone = zone_it->second;
  state_.last_frame_ms = frame.timestamp_ms;
  ++state_.stats.frames;
  for (const auto& d : frame.detections) {
    if (d.confidence >= config_.confidence_threshold &&
        geometry::contains(zone, detection::anchor_point(d.bbox))) {
      ++state_.stats.in_zone_detections;
    }
  }

  if (state_.phase == Phase::kRed) {
    ++state_.stats.red_frames;
    return;
  }

  for (MobilityGroup g : kRestrictedGroups) {
    PresenceTracker& tracker = state_.trackers[tracker_slot(g)];
    const bool detected = detected_in_zone(frame, g, zone);
    const bool was_absent = tracker.confirmed_absent;
    tracker = presence_update(tracker, detected, config_.validation_frames);
    if (detected) {
      tracker.last_seen_ms = frame.timestamp_ms;
      tracker.confirmed_at_ms = -1;
    } else if (tracker.confirmed_absent && !was_absent) {
      tracker.confirmed_at_ms = frame.timestamp_ms;
    }
  }
  state_.audible_boost = active_group(state_) == MobilityGroup::kVisualImpairment;
}

SignalCommand SignalController::tick(std::int64_t now_s) {
  if (now_s <= state_.last_tick_s) {
    throw OrderingError("tick at " + std::to_string(now_s) +
                        " s does not follow tick at " +
                        std::to_string(state_.last_tick_s) + " s");
  }
  state_.last_tick_s = now_s;
  SignalCommand cmd;
  cmd.ts_s = now_s;
  if (state_.phase == Phase::kRed) {
    state_.audible_boost = false;
    return cmd;
  }

  state_.elapsed_s = static_cast<int>(now_s - state_.green_start_s);
  const auto active = active_group(state_);
  cmd.active_group = active;
  if (state_.elapsed_s >= config_.base_green_s + state_.granted_extension_s) {
    if (active && state_.granted_extension_s < config_.cap(*active)) {
      ++state_.granted_extension_s;
      ++state_.granted_by_group[tracker_slot(*active)];
      cmd.extend_green_by = 1;
    } else {
      state_.phase = Phase::kRed;
      cmd.green_ended = true;
    }
  }
  cmd.audible_boost = state_.phase == Phase::kGreen &&
                      active == MobilityGroup::kVisualImpairment;
  state_.audible_boost = cmd.audible_boost;
  return cmd;
}

std::int64_t SignalController::scheduled_green_end_s() const {
  return state_.green_start_s + config_.base_green_s + state_.granted_extension_s;
}

}  // namespace barrierfree::control
