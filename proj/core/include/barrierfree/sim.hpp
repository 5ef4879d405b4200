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
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "barrierfree/controller.hpp"
#include "barrierfree/detection.hpp"

namespace barrierfree::sim {

using detection::MobilityGroup;

struct SpeedDistribution {
  double mean_m_s = 1.2;
  // 0 gives a fixed speed.
  double stddev_m_s = 0.0;
};

// Normal speed distribution whose 95th-percentile crossing time exceeds the
// base green by `extra_time_95_s`, with the given coefficient of variation.
SpeedDistribution calibrated_speed(double extra_time_95_s,
                                   double crossing_length_m,
                                   double base_green_s,
                                   double coefficient_of_variation = 0.15);

struct Arrival {
  MobilityGroup group = MobilityGroup::kWalkingImpairment;
  double entry_time_s = 0.0;
  // Arrivals sharing a phase index cross during the same green phase.
  int phase = 0;
};

// Two-state burst channel: in the bad state every frame is missed.
struct BurstChannel {
  bool enabled = false;
  double p_good_to_bad = 0.05;
  double p_bad_to_good = 0.5;
};

struct ScenarioConfig {
  double crossing_length_m = 12.0;
  // Walking, visual, burden, unrestricted.
  std::array<SpeedDistribution, 4> speeds{};
  std::vector<Arrival> arrivals;
  double miss_probability = 0.35;
  BurstChannel burst;
  double frame_interval_ms = 363.4;
  double inference_ms = 40.4;
  int num_cameras = 8;
  int base_green_s = 10;
  int validation_frames = 2;
  double confidence_threshold = 0.5;
  // Spacing of consecutive green phases in the event log.
  int cycle_s = 60;
  std::uint64_t rng_seed = 1;
  int ensemble_size = 500;

  // One crossing per group per ensemble member, calibrated speeds,
  // 35 % per-frame miss rate. The miss rate is a tuning choice, not a
  // measured value.
  static ScenarioConfig defaults();

  const SpeedDistribution& speed(MobilityGroup g) const;
  SpeedDistribution& speed(MobilityGroup g);

  // Throws ConfigError.
  void validate() const;
  control::ControllerConfig controller_config() const;
};

// Config document mirroring ScenarioConfig. Missing fields keep their
// defaults; unknown fields raise ConfigError.
ScenarioConfig scenario_config_from_json(const nlohmann::json& doc);
nlohmann::json scenario_config_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario_config(const std::string& path);

struct SimMetrics {
  double success_rate = 0.0;       // %
  double latency_s = 0.0;          // mean over phases
  double real_success_rate = 0.0;  // %
  // Walking, visual, burden.
  std::array<double, 3> avg_extended_green_s{};
  std::int64_t agents = 0;
  std::int64_t phases = 0;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct AgentOutcome {
  MobilityGroup group = MobilityGroup::kWalkingImpairment;
  int phase = 0;
  double speed_m_s = 0.0;
  double exit_time_s = 0.0;  // relative to phase start
  bool success = false;
  bool real_success = false;
};

struct PhaseOutcome {
  int phase = 0;
  int granted_extension_s = 0;
  std::array<int, 3> granted_by_group{};
  // Relative to phase start.
  double nominal_green_end_s = 0.0;
  double actual_green_end_s = 0.0;
  double latency_s = 0.0;
  bool ended_by_cap = false;
  bool has_restricted = false;
  std::array<bool, 3> groups_present{};
};

struct ScenarioResult {
  SimMetrics metrics;
  std::vector<AgentOutcome> agents;
  std::vector<PhaseOutcome> phases;
  // Frames in absolute time; phase k starts at k * cycle_s.
  std::vector<detection::FrameDetections> frames;
  std::vector<control::SignalCommand> commands;
};

// Simulates every phase of cfg with seed cfg.rng_seed.
//
// Agents walk at constant speed across a ground-plane zone [0, L] x [-1, 1].
// The crossing's camera delivers a frame every frame_interval_ms (at a
// round-robin slot offset) plus inference_ms; each in-zone agent is reported
// unless the miss channel fires. Per phase:
//   actual end   the controller's green end,
//   nominal end  the same green but cut at the moment absence was confirmed
//                (no wait for the next whole second); equal to the actual end
//                when the cap ended the phase,
//   success      agent exits no later than the nominal end,
//   real success agent exits no later than the actual end,
//   latency      green remaining after the last restricted exit (never
//                before base green ends).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Pools ensemble_size runs with seeds derived from cfg.rng_seed.
SimMetrics run_ensemble(const ScenarioConfig& cfg);

struct AblationRow {
  int validation_frames = 0;
  SimMetrics metrics;
};

// Same ensemble seeds for every N, so rows are paired.
std::vector<AblationRow> ablate_n(const ScenarioConfig& cfg,
                                  std::span<const int> n_values);

// Field-study reference values by N (1..5); for annotation only.
struct ReferenceRow {
  int n;
  double success_rate, latency_s, real_success_rate;
  std::array<double, 3> avg_extended_green_s;
};
const std::array<ReferenceRow, 5>& reference_table();

inline constexpr const char* kMetricsCsvHeader =
    "N,success_rate,latency_s,real_success_rate,avg_ext_walking,"
    "avg_ext_visual,avg_ext_burden";
std::string metrics_csv_row(int n, const SimMetrics& m);
std::string ablation_csv(std::span<const AblationRow> rows);

// Probability that m independent frames, each missed with probability p,
// contain a run of at least n consecutive misses. Exact dynamic program over
// the current run length.
double absence_false_alarm_prob(double p, int n, int m);

// Per-frame miss process shared by the simulator and the validation check.
class MissChannel {
 public:
  MissChannel(double miss_probability, BurstChannel burst, std::uint64_t seed);
  // Draws the next frame; true means the detector missed.
  bool next_miss();

 private:
  double p_;
  BurstChannel burst_;
  bool bad_ = false;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

// Runs `windows` independent windows of m frames through a presence tracker
// that saw the pedestrian at frame 0, and counts windows whose tracker
// confirmed absence while the pedestrian was still there.
std::int64_t simulate_premature_absence(double p, int n, int m,
                                        std::int64_t windows,
                                        std::uint64_t seed);

// Deterministic 64-bit seed mixing.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace barrierfree::sim
