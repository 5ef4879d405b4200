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
#include "barrierfree/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "barrierfree/error.hpp"

namespace barrierfree::sim {
namespace {

using nlohmann::json;

constexpr double kZoneHalfWidthM = 1.0;
constexpr double kBoxHalfWidthM = 0.3;
constexpr double kBoxHeightM = 1.7;
constexpr double kDetectionConfidence = 0.9;
constexpr double kZ95 = 1.6448536269514722;

// Seed streams.
constexpr std::uint64_t kSpeedStream = 1'000'000;
constexpr std::uint64_t kMissStream = 2'000'000;
constexpr std::uint64_t kSlotStream = 3'000'000;

std::size_t speed_slot(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return 0;
    case MobilityGroup::kVisualImpairment: return 1;
    case MobilityGroup::kMobilityBurden: return 2;
    case MobilityGroup::kUnrestricted: return 3;
  }
  return 3;
}

detection::ObjectClass representative_class(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return detection::ObjectClass::kPersonWithWheelchair;
    case MobilityGroup::kVisualImpairment: return detection::ObjectClass::kPersonWithBlindstick;
    case MobilityGroup::kMobilityBurden: return detection::ObjectClass::kPersonWithLuggage;
    case MobilityGroup::kUnrestricted: break;
  }
  return detection::ObjectClass::kPersonWithoutMobilityRestrictions;
}

double draw_speed(const SpeedDistribution& d, std::uint64_t seed) {
  if (d.stddev_m_s == 0.0) return d.mean_m_s;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(d.mean_m_s, d.stddev_m_s);
  // Truncated at zero by rejection.
  for (int i = 0; i < 1000; ++i) {
    const double v = normal(rng);
    if (v > 0.0) return v;
  }
  return d.mean_m_s;
}

struct Agent {
  Arrival arrival;
  double speed_m_s = 0.0;
  double exit_time_s = 0.0;
  MissChannel channel;
};

class Accumulator {
 public:
  void add_agent(const AgentOutcome& a) {
    ++agents_;
    success_ += a.success ? 1 : 0;
    real_success_ += a.real_success ? 1 : 0;
  }
  void add_phase(const PhaseOutcome& p) {
    if (!p.has_restricted) return;
    ++phases_;
    latency_sum_ += p.latency_s;
    for (std::size_t g = 0; g < 3; ++g) {
      if (!p.groups_present[g]) continue;
      ext_sum_[g] += p.granted_by_group[g];
      ++ext_n_[g];
    }
  }
  void add(const ScenarioResult& r) {
    for (const auto& a : r.agents) add_agent(a);
    for (const auto& p : r.phases) add_phase(p);
  }
  SimMetrics finish() const {
    SimMetrics m;
    m.agents = agents_;
    m.phases = phases_;
    if (agents_ > 0) {
      m.success_rate = 100.0 * static_cast<double>(success_) / static_cast<double>(agents_);
      m.real_success_rate =
          100.0 * static_cast<double>(real_success_) / static_cast<double>(agents_);
    }
    if (phases_ > 0) m.latency_s = latency_sum_ / static_cast<double>(phases_);
    for (std::size_t g = 0; g < 3; ++g) {
      if (ext_n_[g] > 0) {
        m.avg_extended_green_s[g] =
            static_cast<double>(ext_sum_[g]) / static_cast<double>(ext_n_[g]);
      }
    }
    return m;
  }

 private:
  std::int64_t agents_ = 0, success_ = 0, real_success_ = 0, phases_ = 0;
  double latency_sum_ = 0.0;
  std::array<std::int64_t, 3> ext_sum_{}, ext_n_{};
};

ScenarioResult simulate(const ScenarioConfig& cfg, bool record) {
  cfg.validate();
  control::SignalController controller(cfg.controller_config());
  const double interval_s = cfg.frame_interval_ms / 1000.0;
  const double base_green = cfg.base_green_s;

  std::vector<Agent> agents;
  agents.reserve(cfg.arrivals.size());
  int last_phase = 0;
  for (std::size_t i = 0; i < cfg.arrivals.size(); ++i) {
    const Arrival& a = cfg.arrivals[i];
    const double v = draw_speed(cfg.speed(a.group), mix_seed(cfg.rng_seed, kSpeedStream + i));
    agents.push_back({.arrival = a,
                      .speed_m_s = v,
                      .exit_time_s = a.entry_time_s + cfg.crossing_length_m / v,
                      .channel = MissChannel(cfg.miss_probability, cfg.burst,
                                             mix_seed(cfg.rng_seed, kMissStream + i))});
    last_phase = std::max(last_phase, a.phase);
  }

  ScenarioResult result;
  Accumulator acc;
  for (int phase = 0; phase <= last_phase; ++phase) {
    const std::int64_t start = static_cast<std::int64_t>(phase) * cfg.cycle_s;
    std::vector<Agent*> crossing;
    for (auto& a : agents) {
      if (a.arrival.phase == phase) crossing.push_back(&a);
    }

    std::mt19937_64 slot_rng(mix_seed(cfg.rng_seed, kSlotStream + static_cast<std::uint64_t>(phase)));
    const int camera = static_cast<int>(slot_rng() % static_cast<std::uint64_t>(cfg.num_cameras));
    const double offset_s = camera * interval_s / cfg.num_cameras;
    auto capture_time = [&](std::int64_t j) { return offset_s + static_cast<double>(j) * interval_s; };
    auto delivery_ms = [&](std::int64_t j) {
      return std::llround((static_cast<double>(start) + capture_time(j)) * 1000.0 +
                          cfg.inference_ms);
    };

    std::int64_t j = 0;
    // Frames delivered up to now_ms, in order; the replay tool groups them
    // the same way.
    auto deliver_until = [&](std::int64_t now_ms) {
      while (delivery_ms(j) <= now_ms) {
        const double cap = capture_time(j);
        detection::FrameDetections frame{.camera_id = camera,
                                         .timestamp_ms = delivery_ms(j),
                                         .detections = {}};
        for (Agent* a : crossing) {
          const bool missed = a->channel.next_miss();
          const bool in_zone = cap >= a->arrival.entry_time_s && cap <= a->exit_time_s;
          if (!in_zone || missed) continue;
          const double pos = a->speed_m_s * (cap - a->arrival.entry_time_s);
          frame.detections.push_back(
              {.object_class = representative_class(a->arrival.group),
               .bbox = detection::BoundingBox(pos - kBoxHalfWidthM, -kBoxHeightM,
                                              pos + kBoxHalfWidthM, 0.0),
               .confidence = kDetectionConfidence,
               .camera_id = camera,
               .timestamp_ms = frame.timestamp_ms});
        }
        controller.ingest_frame(frame);
        if (record) result.frames.push_back(std::move(frame));
        ++j;
      }
    };

    deliver_until(start * 1000);
    controller.begin_green(start);
    control::SignalCommand last{};
    for (std::int64_t t = start + 1;; ++t) {
      deliver_until(t * 1000);
      last = controller.tick(t);
      if (record) result.commands.push_back(last);
      if (last.green_ended) break;
    }

    const auto& state = controller.state();
    PhaseOutcome po;
    po.phase = phase;
    po.granted_extension_s = state.granted_extension_s;
    po.granted_by_group = state.granted_by_group;
    po.actual_green_end_s = static_cast<double>(last.ts_s - start);
    po.ended_by_cap = last.active_group.has_value();
    po.nominal_green_end_s = po.actual_green_end_s;
    if (!po.ended_by_cap) {
      std::int64_t confirmed_ms = -1;
      for (const auto& tr : state.trackers) {
        if (tr.first_seen) confirmed_ms = std::max(confirmed_ms, tr.confirmed_at_ms);
      }
      if (confirmed_ms >= 0) {
        const double confirmed_rel = static_cast<double>(confirmed_ms) / 1000.0 -
                                     static_cast<double>(start);
        po.nominal_green_end_s =
            std::min(po.actual_green_end_s, std::max(base_green, confirmed_rel));
      }
    }

    double last_exit = -1.0;
    for (Agent* a : crossing) {
      if (!detection::is_restricted(a->arrival.group)) continue;
      po.has_restricted = true;
      po.groups_present[control::tracker_slot(a->arrival.group)] = true;
      last_exit = std::max(last_exit, a->exit_time_s);
      AgentOutcome ao{.group = a->arrival.group,
                      .phase = phase,
                      .speed_m_s = a->speed_m_s,
                      .exit_time_s = a->exit_time_s,
                      .success = a->exit_time_s <= po.nominal_green_end_s,
                      .real_success = a->exit_time_s <= po.actual_green_end_s};
      acc.add_agent(ao);
      result.agents.push_back(ao);
    }
    if (po.has_restricted) {
      po.latency_s = std::max(0.0, po.actual_green_end_s - std::max(last_exit, base_green));
    }
    acc.add_phase(po);
    result.phases.push_back(po);
  }
  result.metrics = acc.finish();
  return result;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t get_int(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

MobilityGroup parse_group(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": group must be a string");
  const auto g = detection::group_from_name(v.get<std::string>());
  if (!g) throw ConfigError(where + ": unknown group '" + v.get<std::string>() + "'");
  return *g;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer applied twice.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(stream));
}

SpeedDistribution calibrated_speed(double extra_time_95_s, double crossing_length_m,
                                   double base_green_s, double coefficient_of_variation) {
  if (!(crossing_length_m > 0.0) || !(base_green_s + extra_time_95_s > 0.0)) {
    throw DomainError("calibrated_speed: crossing length and time must be positive");
  }
  if (!(coefficient_of_variation >= 0.0 && coefficient_of_variation * kZ95 < 1.0)) {
    throw DomainError("calibrated_speed: coefficient of variation out of range");
  }
  const double slow_speed = crossing_length_m / (base_green_s + extra_time_95_s);
  const double mean = slow_speed / (1.0 - kZ95 * coefficient_of_variation);
  return {.mean_m_s = mean, .stddev_m_s = coefficient_of_variation * mean};
}

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig cfg;
  const double l = cfg.crossing_length_m;
  const double tg = cfg.base_green_s;
  cfg.speed(MobilityGroup::kWalkingImpairment) = calibrated_speed(5.8, l, tg);
  cfg.speed(MobilityGroup::kVisualImpairment) = calibrated_speed(7.9, l, tg);
  cfg.speed(MobilityGroup::kMobilityBurden) = calibrated_speed(2.7, l, tg);
  cfg.speed(MobilityGroup::kUnrestricted) = calibrated_speed(0.0, l, tg);
  cfg.arrivals = {
      {.group = MobilityGroup::kWalkingImpairment, .entry_time_s = 0.0, .phase = 0},
      {.group = MobilityGroup::kVisualImpairment, .entry_time_s = 0.0, .phase = 1},
      {.group = MobilityGroup::kMobilityBurden, .entry_time_s = 0.0, .phase = 2},
  };
  return cfg;
}

const SpeedDistribution& ScenarioConfig::speed(MobilityGroup g) const {
  return speeds[speed_slot(g)];
}

SpeedDistribution& ScenarioConfig::speed(MobilityGroup g) { return speeds[speed_slot(g)]; }

void ScenarioConfig::validate() const {
  if (!(crossing_length_m > 0.0)) throw ConfigError("crossing_length_m must be positive");
  for (const auto& s : speeds) {
    if (!(s.mean_m_s > 0.0)) throw ConfigError("speed means must be positive");
    if (!(s.stddev_m_s >= 0.0)) throw ConfigError("speed stddev must be non-negative");
  }
  for (const auto& a : arrivals) {
    if (!(a.entry_time_s >= 0.0)) throw ConfigError("entry_time_s must be non-negative");
    if (a.phase < 0) throw ConfigError("arrival phase must be non-negative");
  }
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(miss_probability)) throw ConfigError("miss_probability must lie in [0, 1]");
  if (!prob(burst.p_good_to_bad) || !prob(burst.p_bad_to_good)) {
    throw ConfigError("burst transition probabilities must lie in [0, 1]");
  }
  if (!(frame_interval_ms > 0.0)) throw ConfigError("frame_interval_ms must be positive");
  if (!(inference_ms >= 0.0)) throw ConfigError("inference_ms must be non-negative");
  if (num_cameras < 1) throw ConfigError("num_cameras must be at least 1");
  if (ensemble_size < 1) throw ConfigError("ensemble_size must be at least 1");
  if (cycle_s < 1) throw ConfigError("cycle_s must be positive");
  controller_config().validate();
  for (const auto& a : arrivals) {
    if (a.entry_time_s >= cycle_s) throw ConfigError("entry_time_s must fall inside the cycle");
  }
}

control::ControllerConfig ScenarioConfig::controller_config() const {
  control::ControllerConfig c;
  c.base_green_s = base_green_s;
  c.validation_frames = validation_frames;
  c.confidence_threshold = confidence_threshold;
  c.frame_interval_ms = frame_interval_ms;
  c.cycle_s = cycle_s;
  for (int cam = 0; cam < num_cameras; ++cam) {
    c.zones.emplace(cam, geometry::rectangle_zone(0.0, -kZoneHalfWidthM, crossing_length_m,
                                                  kZoneHalfWidthM, "crossing"));
  }
  return c;
}

ScenarioConfig scenario_config_from_json(const json& doc) {
  const std::string where = "scenario config";
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  reject_unknown(doc,
                 {"crossing_length_m", "speeds", "arrivals", "miss_probability", "burst",
                  "frame_interval_ms", "inference_ms", "num_cameras", "base_green_s",
                  "validation_frames", "confidence_threshold", "cycle_s", "rng_seed",
                  "ensemble_size"},
                 where);
  ScenarioConfig cfg = ScenarioConfig::defaults();
  try {
    if (doc.contains("crossing_length_m")) cfg.crossing_length_m = get_number(doc, "crossing_length_m", where);
    if (doc.contains("base_green_s")) cfg.base_green_s = static_cast<int>(get_int(doc, "base_green_s", where));
    // Default speeds follow the configured geometry.
    const double l = cfg.crossing_length_m;
    const double tg = cfg.base_green_s;
    cfg.speed(MobilityGroup::kWalkingImpairment) = calibrated_speed(5.8, l, tg);
    cfg.speed(MobilityGroup::kVisualImpairment) = calibrated_speed(7.9, l, tg);
    cfg.speed(MobilityGroup::kMobilityBurden) = calibrated_speed(2.7, l, tg);
    cfg.speed(MobilityGroup::kUnrestricted) = calibrated_speed(0.0, l, tg);
    if (doc.contains("speeds")) {
      const json& speeds = doc["speeds"];
      if (!speeds.is_object()) throw ConfigError(where + ": speeds must be an object");
      for (const auto& [name, entry] : speeds.items()) {
        const auto g = detection::group_from_name(name);
        if (!g) throw ConfigError(where + ": unknown group '" + name + "' in speeds");
        if (!entry.is_object()) throw ConfigError(where + ": speeds." + name + " must be an object");
        reject_unknown(entry, {"mean_m_s", "stddev_m_s"}, where + ".speeds." + name);
        auto& s = cfg.speed(*g);
        if (entry.contains("mean_m_s")) s.mean_m_s = get_number(entry, "mean_m_s", where);
        if (entry.contains("stddev_m_s")) s.stddev_m_s = get_number(entry, "stddev_m_s", where);
      }
    }
    if (doc.contains("arrivals")) {
      const json& arr = doc["arrivals"];
      if (!arr.is_array()) throw ConfigError(where + ": arrivals must be an array");
      cfg.arrivals.clear();
      for (const auto& a : arr) {
        if (!a.is_object()) throw ConfigError(where + ": each arrival must be an object");
        reject_unknown(a, {"group", "entry_time_s", "phase"}, where + ".arrivals");
        Arrival arrival;
        arrival.group = parse_group(a.at("group"), where);
        if (a.contains("entry_time_s")) arrival.entry_time_s = get_number(a, "entry_time_s", where);
        if (a.contains("phase")) arrival.phase = static_cast<int>(get_int(a, "phase", where));
        cfg.arrivals.push_back(arrival);
      }
    }
    if (doc.contains("miss_probability")) cfg.miss_probability = get_number(doc, "miss_probability", where);
    if (doc.contains("burst")) {
      const json& b = doc["burst"];
      if (!b.is_object()) throw ConfigError(where + ": burst must be an object");
      reject_unknown(b, {"enabled", "p_good_to_bad", "p_bad_to_good"}, where + ".burst");
      if (b.contains("enabled")) {
        if (!b["enabled"].is_boolean()) throw ConfigError(where + ": burst.enabled must be a boolean");
        cfg.burst.enabled = b["enabled"].get<bool>();
      }
      if (b.contains("p_good_to_bad")) cfg.burst.p_good_to_bad = get_number(b, "p_good_to_bad", where);
      if (b.contains("p_bad_to_good")) cfg.burst.p_bad_to_good = get_number(b, "p_bad_to_good", where);
    }
    if (doc.contains("frame_interval_ms")) cfg.frame_interval_ms = get_number(doc, "frame_interval_ms", where);
    if (doc.contains("inference_ms")) cfg.inference_ms = get_number(doc, "inference_ms", where);
    if (doc.contains("num_cameras")) cfg.num_cameras = static_cast<int>(get_int(doc, "num_cameras", where));
    if (doc.contains("validation_frames")) cfg.validation_frames = static_cast<int>(get_int(doc, "validation_frames", where));
    if (doc.contains("confidence_threshold")) cfg.confidence_threshold = get_number(doc, "confidence_threshold", where);
    if (doc.contains("cycle_s")) cfg.cycle_s = static_cast<int>(get_int(doc, "cycle_s", where));
    if (doc.contains("rng_seed")) {
      const auto& v = doc["rng_seed"];
      if (!v.is_number_unsigned()) throw ConfigError(where + ": rng_seed must be a non-negative integer");
      cfg.rng_seed = v.get<std::uint64_t>();
    }
    if (doc.contains("ensemble_size")) cfg.ensemble_size = static_cast<int>(get_int(doc, "ensemble_size", where));
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

json scenario_config_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["crossing_length_m"] = cfg.crossing_length_m;
  json speeds = json::object();
  for (auto g : {MobilityGroup::kWalkingImpairment, MobilityGroup::kVisualImpairment,
                 MobilityGroup::kMobilityBurden, MobilityGroup::kUnrestricted}) {
    speeds[std::string(detection::group_name(g))] = {
        {"mean_m_s", cfg.speed(g).mean_m_s}, {"stddev_m_s", cfg.speed(g).stddev_m_s}};
  }
  doc["speeds"] = speeds;
  json arrivals = json::array();
  for (const auto& a : cfg.arrivals) {
    arrivals.push_back({{"group", std::string(detection::group_name(a.group))},
                        {"entry_time_s", a.entry_time_s},
                        {"phase", a.phase}});
  }
  doc["arrivals"] = arrivals;
  doc["miss_probability"] = cfg.miss_probability;
  doc["burst"] = {{"enabled", cfg.burst.enabled},
                  {"p_good_to_bad", cfg.burst.p_good_to_bad},
                  {"p_bad_to_good", cfg.burst.p_bad_to_good}};
  doc["frame_interval_ms"] = cfg.frame_interval_ms;
  doc["inference_ms"] = cfg.inference_ms;
  doc["num_cameras"] = cfg.num_cameras;
  doc["base_green_s"] = cfg.base_green_s;
  doc["validation_frames"] = cfg.validation_frames;
  doc["confidence_threshold"] = cfg.confidence_threshold;
  doc["cycle_s"] = cfg.cycle_s;
  doc["rng_seed"] = cfg.rng_seed;
  doc["ensemble_size"] = cfg.ensemble_size;
  return doc;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  try {
    return scenario_config_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) { return simulate(cfg, true); }

SimMetrics run_ensemble(const ScenarioConfig& cfg) {
  cfg.validate();
  Accumulator acc;
  ScenarioConfig member = cfg;
  for (int i = 0; i < cfg.ensemble_size; ++i) {
    member.rng_seed = mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(i));
    acc.add(simulate(member, false));
  }
  return acc.finish();
}

std::vector<AblationRow> ablate_n(const ScenarioConfig& cfg, std::span<const int> n_values) {
  if (n_values.empty()) throw ConfigError("ablate_n: no validation depths given");
  std::vector<AblationRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    ScenarioConfig c = cfg;
    c.validation_frames = n;
    rows.push_back({.validation_frames = n, .metrics = run_ensemble(c)});
  }
  return rows;
}

const std::array<ReferenceRow, 5>& reference_table() {
  static const std::array<ReferenceRow, 5> rows = {{
      {1, 13.4, 0.8, 32.3, {1.6, 2.2, 0.8}},
      {2, 77.2, 1.2, 95.4, {2.9, 3.9, 1.3}},
      {3, 92.7, 1.6, 96.6, {3.1, 4.2, 1.6}},
      {4, 94.6, 1.9, 96.9, {3.3, 4.3, 1.7}},
      {5, 94.8, 2.3, 97.0, {3.5, 4.5, 1.9}},
  }};
  return rows;
}

std::string metrics_csv_row(int n, const SimMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f", n, m.success_rate,
                m.latency_s, m.real_success_rate, m.avg_extended_green_s[0],
                m.avg_extended_green_s[1], m.avg_extended_green_s[2]);
  return buf;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  for (const auto& r : rows) out += metrics_csv_row(r.validation_frames, r.metrics) + "\n";
  return out;
}

double absence_false_alarm_prob(double p, int n, int m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("miss probability must lie in [0, 1]");
  if (n < 1) throw DomainError("run length must be at least 1");
  if (m < 0) throw DomainError("window length must be non-negative");
  // run[r]: probability of no qualifying run yet and a current run of r misses.
  std::vector<double> run(static_cast<std::size_t>(n), 0.0);
  run[0] = 1.0;
  double hit = 0.0;
  for (int frame = 0; frame < m; ++frame) {
    std::vector<double> next(run.size(), 0.0);
    for (std::size_t r = 0; r < run.size(); ++r) {
      next[0] += (1.0 - p) * run[r];
      if (r + 1 < run.size()) {
        next[r + 1] += p * run[r];
      } else {
        hit += p * run[r];
      }
    }
    run = std::move(next);
  }
  return hit;
}

MissChannel::MissChannel(double miss_probability, BurstChannel burst, std::uint64_t seed)
    : p_(miss_probability), burst_(burst), rng_(seed) {}

bool MissChannel::next_miss() {
  if (burst_.enabled) {
    const double u = unit_(rng_);
    bad_ = bad_ ? !(u < burst_.p_bad_to_good) : (u < burst_.p_good_to_bad);
  }
  const bool miss = unit_(rng_) < p_;
  return bad_ || miss;
}

std::int64_t simulate_premature_absence(double p, int n, int m, std::int64_t windows,
                                        std::uint64_t seed) {
  MissChannel channel(p, {}, seed);
  std::int64_t premature = 0;
  for (std::int64_t w = 0; w < windows; ++w) {
    control::PresenceTracker tracker;
    tracker = control::presence_update(tracker, true, n);  // initial detection
    bool confirmed = false;
    for (int f = 0; f < m; ++f) {
      tracker = control::presence_update(tracker, !channel.next_miss(), n);
      confirmed = confirmed || tracker.confirmed_absent;
    }
    premature += confirmed ? 1 : 0;
  }
  return premature;
}

}  // namespace barrierfree::sim
