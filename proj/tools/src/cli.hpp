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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "barrierfree/sim.hpp"

namespace barrierfree::cli {

inline constexpr const char* kOutDirEnv = "BARRIERFREE_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "barrierfree-out";

// Run record written next to every command's outputs. Contains no
// timestamps or absolute paths, so equal inputs give equal bytes.
struct RunManifest {
  std::string command;
  std::string config_digest;
  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  // Relative to the output directory.
  std::vector<std::string> outputs;
};

std::string sha256_hex(std::string_view bytes);
// "sha256:<hex>" of the compact dump of a key-sorted document.
std::string config_digest(const nlohmann::json& canonical);
std::string file_digest(const std::string& path);

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

// "1..5", "1,2,4" or "3". Throws ConfigError.
std::vector<int> parse_n_list(const std::string& text);

// "640x512". Throws ConfigError.
std::pair<double, double> parse_image_size(const std::string& text);

// Ablation rows followed by the field-study reference columns (blank where
// no reference exists for that N).
std::string ablation_report_csv(std::span<const sim::AblationRow> rows);

// $BARRIERFREE_OUT_DIR when set and non-empty, else kDefaultOutDir.
std::string default_out_dir();

// Entry point. Returns the process exit status.
int run(int argc, const char* const* argv);

}  // namespace barrierfree::cli
