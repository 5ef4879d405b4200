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
#include "barrierfree/controller_io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "barrierfree/error.hpp"

namespace barrierfree::control {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kDetectionFields = {
    "class_id", "x_min", "y_min", "x_max", "y_max", "confidence"};

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw ConfigError(where + ": field '" + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ConfigError(where + ": field '" + key + "' must be a number");
  }
  return it->get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(where + ": unknown field '" + key + "'");
    }
  }
}

}  // namespace

std::vector<FrameDetections> read_event_stream(std::istream& in,
                                               const std::string& source) {
  std::vector<FrameDetections> frames;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t last_ts = std::numeric_limits<std::int64_t>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(source, line_no, "expected a JSON object");

    std::int64_t ts = 0;
    int camera = 0;
    std::optional<detection::Detection> det;
    try {
      std::set<std::string> allowed = kDetectionFields;
      allowed.insert("ts_ms");
      allowed.insert("camera_id");
      reject_unknown(obj, allowed, "event");
      ts = require_int(obj, "ts_ms", "event");
      camera = static_cast<int>(require_int(obj, "camera_id", "event"));
      std::size_t present = 0;
      for (const auto& f : kDetectionFields) present += obj.contains(f) ? 1 : 0;
      if (present != 0 && present != kDetectionFields.size()) {
        throw ConfigError("event: detection lines need all of class_id, x_min, "
                          "y_min, x_max, y_max, confidence");
      }
      if (present != 0) {
        det = detection::Detection{
            .object_class = detection::class_from_index(
                static_cast<int>(require_int(obj, "class_id", "event"))),
            .bbox = detection::BoundingBox(require_number(obj, "x_min", "event"),
                                           require_number(obj, "y_min", "event"),
                                           require_number(obj, "x_max", "event"),
                                           require_number(obj, "y_max", "event")),
            .confidence = require_number(obj, "confidence", "event"),
            .camera_id = camera,
            .timestamp_ms = ts,
        };
        det->validate();
      }
      if (ts < 0) throw ConfigError("event: ts_ms must be non-negative");
    } catch (const std::logic_error& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ConfigError& e) {
      throw ParseError(source, line_no, e.what());
    }

    if (ts < last_ts) {
      throw OrderingError(source + ":" + std::to_string(line_no) + ": ts_ms " +
                          std::to_string(ts) + " is earlier than the previous event (" +
                          std::to_string(last_ts) + ")");
    }
    last_ts = ts;
    if (frames.empty() || frames.back().timestamp_ms != ts ||
        frames.back().camera_id != camera) {
      frames.push_back({.camera_id = camera, .timestamp_ms = ts, .detections = {}});
    }
    if (det) frames.back().detections.push_back(*det);
  }
  return frames;
}

std::vector<FrameDetections> read_event_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open event file '" + path + "'");
  return read_event_stream(in, path);
}

void write_event_stream(std::ostream& out,
                        const std::vector<FrameDetections>& frames) {
  for (const auto& f : frames) {
    if (f.detections.empty()) {
      ordered_json marker;
      marker["ts_ms"] = f.timestamp_ms;
      marker["camera_id"] = f.camera_id;
      out << marker.dump() << '\n';
      continue;
    }
    for (const auto& d : f.detections) {
      ordered_json line;
      line["ts_ms"] = d.timestamp_ms;
      line["camera_id"] = d.camera_id;
      line["class_id"] = detection::class_index(d.object_class);
      line["x_min"] = d.bbox.x_min();
      line["y_min"] = d.bbox.y_min();
      line["x_max"] = d.bbox.x_max();
      line["y_max"] = d.bbox.y_max();
      line["confidence"] = d.confidence;
      out << line.dump() << '\n';
    }
  }
}

std::string command_line(const SignalCommand& cmd) {
  ordered_json line;
  line["ts_s"] = cmd.ts_s;
  line["extend_green_by"] = cmd.extend_green_by;
  line["audible_boost"] = cmd.audible_boost;
  if (cmd.active_group) {
    line["active_group"] = std::string(detection::group_name(*cmd.active_group));
  } else {
    line["active_group"] = nullptr;
  }
  return line.dump();
}

void write_command_log(std::ostream& out, const std::vector<SignalCommand>& commands) {
  for (const auto& c : commands) out << command_line(c) << '\n';
}

ControllerConfig controller_config_from_json(const json& doc) {
  const std::string where = "controller config";
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  reject_unknown(doc,
                 {"base_green_s", "max_extension_s", "validation_frames",
                  "confidence_threshold", "frame_interval_ms", "cycle_s", "zones"},
                 where);
  ControllerConfig cfg;
  if (doc.contains("base_green_s")) {
    cfg.base_green_s = static_cast<int>(require_int(doc, "base_green_s", where));
  }
  if (doc.contains("max_extension_s")) {
    const json& caps = doc["max_extension_s"];
    if (!caps.is_object()) throw ConfigError(where + ": max_extension_s must be an object");
    reject_unknown(caps, {"walking", "visual", "burden"}, where + ".max_extension_s");
    const std::string w = where + ".max_extension_s";
    if (caps.contains("walking")) cfg.max_extension.walking_s = static_cast<int>(require_int(caps, "walking", w));
    if (caps.contains("visual")) cfg.max_extension.visual_s = static_cast<int>(require_int(caps, "visual", w));
    if (caps.contains("burden")) cfg.max_extension.burden_s = static_cast<int>(require_int(caps, "burden", w));
  }
  if (doc.contains("validation_frames")) {
    const json& n = doc["validation_frames"];
    if (n.is_string() && n.get<std::string>() == "inf") {
      cfg.validation_frames = kNeverConfirm;
    } else {
      const std::int64_t v = require_int(doc, "validation_frames", where);
      if (v < 1 || v > kNeverConfirm) {
        throw ConfigError(where + ": validation_frames must be at least 1");
      }
      cfg.validation_frames = static_cast<int>(v);
    }
  }
  if (doc.contains("confidence_threshold")) {
    cfg.confidence_threshold = require_number(doc, "confidence_threshold", where);
  }
  if (doc.contains("frame_interval_ms")) {
    cfg.frame_interval_ms = require_number(doc, "frame_interval_ms", where);
  }
  if (doc.contains("cycle_s")) cfg.cycle_s = static_cast<int>(require_int(doc, "cycle_s", where));

  const auto zones = doc.find("zones");
  if (zones == doc.end() || !zones->is_object() || zones->empty()) {
    throw ConfigError(where + ": 'zones' must map camera ids to vertex lists");
  }
  for (const auto& [key, verts] : zones->items()) {
    int camera = 0;
    try {
      std::size_t used = 0;
      camera = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ConfigError(where + ": zone key '" + key + "' is not a camera id");
    }
    if (!verts.is_array()) throw ConfigError(where + ": zone '" + key + "' must be an array");
    std::vector<geometry::Point> points;
    for (const auto& v : verts) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(where + ": zone '" + key + "' vertices must be [x, y] pairs");
      }
      points.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    try {
      cfg.zones.emplace(camera, geometry::validate_polygon(std::move(points), key));
    } catch (const GeometryError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

json controller_config_to_json(const ControllerConfig& config) {
  json doc;
  doc["base_green_s"] = config.base_green_s;
  doc["max_extension_s"] = {{"walking", config.max_extension.walking_s},
                            {"visual", config.max_extension.visual_s},
                            {"burden", config.max_extension.burden_s}};
  if (config.validation_frames == kNeverConfirm) {
    doc["validation_frames"] = "inf";
  } else {
    doc["validation_frames"] = config.validation_frames;
  }
  doc["confidence_threshold"] = config.confidence_threshold;
  doc["frame_interval_ms"] = config.frame_interval_ms;
  doc["cycle_s"] = config.cycle_s;
  json zones = json::object();
  for (const auto& [camera, zone] : config.zones) {
    json verts = json::array();
    for (const auto& p : zone.vertices()) verts.push_back({p.x, p.y});
    zones[std::to_string(camera)] = verts;
  }
  doc["zones"] = zones;
  return doc;
}

ControllerConfig load_controller_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open controller config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  try {
    return controller_config_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<SignalCommand> replay(const ControllerConfig& config,
                                  const std::vector<FrameDetections>& frames) {
  SignalController controller(config);
  std::vector<SignalCommand> commands;
  std::size_t next = 0;
  const bool cycling = config.cycle_s > 0;
  for (std::int64_t t = 0;; ++t) {
    while (next < frames.size() && frames[next].timestamp_ms <= t * 1000) {
      controller.ingest_frame(frames[next++]);
    }
    if (controller.green()) {
      commands.push_back(controller.tick(t));
      if (controller.green()) continue;
      if (!cycling || next == frames.size()) break;
    } else if (t == 0 || (cycling && t % config.cycle_s == 0)) {
      controller.begin_green(t);
    }
  }
  return commands;
}

}  // namespace barrierfree::control
