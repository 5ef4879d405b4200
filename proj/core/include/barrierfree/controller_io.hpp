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

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "barrierfree/controller.hpp"

namespace barrierfree::control {

// Detection events are one JSON object per line:
//   {"ts_ms":..,"camera_id":..,"class_id":..,"x_min":..,"y_min":..,
//    "x_max":..,"y_max":..,"confidence":..}
// A line carrying only ts_ms and camera_id marks a frame with no
// detections. Consecutive lines with the same (ts_ms, camera_id) form one
// frame. Timestamps must be non-decreasing; violations raise OrderingError
// naming the line.
std::vector<FrameDetections> read_event_stream(std::istream& in,
                                               const std::string& source);
std::vector<FrameDetections> read_event_file(const std::string& path);

void write_event_stream(std::ostream& out,
                        const std::vector<FrameDetections>& frames);

// {"ts_s":..,"extend_green_by":..,"audible_boost":..,"active_group":..}
// with active_group null when no restricted group is present.
std::string command_line(const SignalCommand& cmd);
void write_command_log(std::ostream& out,
                       const std::vector<SignalCommand>& commands);

// Controller configuration document. Zones are keyed by camera id:
//   {"base_green_s":10,"max_extension_s":{"walking":6,"visual":8,"burden":3},
//    "validation_frames":2,"confidence_threshold":0.5,
//    "frame_interval_ms":363.4,"cycle_s":0,
//    "zones":{"0":[[x,y],[x,y],[x,y],...]}}
// Every field except "zones" is optional. Unknown fields raise ConfigError.
ControllerConfig controller_config_from_json(const nlohmann::json& doc);
nlohmann::json controller_config_to_json(const ControllerConfig& config);
ControllerConfig load_controller_config(const std::string& path);

// Streams frames through a controller: green starts at t = 0 (and at every
// multiple of cycle_s when cycling), ticks fire on every whole second, and
// frames stamped at or before a tick are ingested before it. Stops when the
// last green phase has ended and no frames remain.
std::vector<SignalCommand> replay(const ControllerConfig& config,
                                  const std::vector<FrameDetections>& frames);

}  // namespace barrierfree::control
