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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "barrierfree/detection.hpp"

namespace barrierfree::dataset {

enum class Season { kSpring, kSummer, kAutumn, kWinter };

std::string_view season_name(Season s);
std::optional<Season> season_from_name(std::string_view name);

struct NormalizedBox {
  double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
};

struct AnnotationRecord {
  std::string image_id;
  int class_index = 0;
  NormalizedBox bbox_norm;
  std::optional<Season> season;

  detection::BoundingBox to_pixels(double image_width,
                                   double image_height) const;
};

// Checks a names file against the fixed 12-class order. Throws ParseError.
void check_names_file(const std::string& path);

// Parses one label file: one `class_index cx cy w h` line per box, blank
// lines ignored. The box must lie inside the unit square. Throws ParseError
// with file and line.
std::vector<AnnotationRecord> parse_label_file(const std::string& path,
                                               const std::string& image_id);

// Reads every *.txt label file in `label_dir` (image_id = file stem,
// sorted). An optional `seasons.csv` in the same directory maps
// `image_id,season` and is not treated as a label file.
std::vector<AnnotationRecord> parse_annotations(const std::string& label_dir,
                                                const std::string& names_file);

struct ClassDistribution {
  std::array<std::int64_t, detection::kNumClasses> counts{};
  // Distinct images per season.
  std::map<Season, std::int64_t> images_per_season;
  // max / min over classes with a nonzero count; 0 when no class occurs.
  double imbalance_ratio = 0.0;
  std::int64_t total() const;
};

ClassDistribution class_distribution(const std::vector<AnnotationRecord>& records);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> eval;
};

// Shuffles distinct image ids (sorted first) with a seeded generator and
// assigns floor(n * ratio) of them to train, but at least one when n > 0.
// Throws DomainError unless 0 < ratio < 1.
Split split_dataset(const std::vector<AnnotationRecord>& records,
                    double ratio = 0.8, std::uint64_t seed = 0);

}  // namespace barrierfree::dataset
