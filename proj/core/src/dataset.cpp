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
#include "barrierfree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <cctype>

#include "barrierfree/error.hpp"

namespace barrierfree::dataset {
namespace {

namespace fs = std::filesystem;

constexpr double kUnitTolerance = 1e-9;
constexpr std::array<std::string_view, 4> kSeasonNames = {"spring", "summer", "autumn",
                                                          "winter"};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::map<std::string, Season> read_seasons(const fs::path& path) {
  std::map<std::string, Season> seasons;
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(path.string(), lineno, "expected 'image_id,season'");
    }
    const std::string id(trim(text.substr(0, comma)));
    const auto season = season_from_name(trim(text.substr(comma + 1)));
    if (id.empty() || !season) {
      throw ParseError(path.string(), lineno, "expected 'image_id,season'");
    }
    if (!seasons.emplace(id, *season).second) {
      throw ParseError(path.string(), lineno, "duplicate image id '" + id + "'");
    }
  }
  return seasons;
}

}  // namespace

std::string_view season_name(Season s) { return kSeasonNames.at(static_cast<std::size_t>(s)); }

std::optional<Season> season_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSeasonNames.size(); ++i) {
    if (kSeasonNames[i] == name) return static_cast<Season>(i);
  }
  return std::nullopt;
}

detection::BoundingBox AnnotationRecord::to_pixels(double image_width,
                                                   double image_height) const {
  if (!(image_width > 0.0) || !(image_height > 0.0)) {
    throw DomainError("image size must be positive");
  }
  const auto& b = bbox_norm;
  // Clamp away rounding slack admitted by the parser.
  const double x0 = std::clamp(b.cx - b.w / 2.0, 0.0, 1.0);
  const double y0 = std::clamp(b.cy - b.h / 2.0, 0.0, 1.0);
  const double x1 = std::clamp(b.cx + b.w / 2.0, 0.0, 1.0);
  const double y1 = std::clamp(b.cy + b.h / 2.0, 0.0, 1.0);
  return detection::BoundingBox(x0 * image_width, y0 * image_height, x1 * image_width,
                                y1 * image_height);
}

void check_names_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open names file");
  std::vector<std::string> names;
  std::string line;
  std::size_t lineno = 0;
  std::size_t trailing_blank = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) {
      ++trailing_blank;
      continue;
    }
    if (trailing_blank > 0) throw ParseError(path, lineno - 1, "blank line inside names file");
    names.emplace_back(text);
    const int index = static_cast<int>(names.size()) - 1;
    if (index >= detection::kNumClasses) {
      throw ParseError(path, lineno, "more than " + std::to_string(detection::kNumClasses) +
                                         " class names");
    }
    const auto expected = detection::class_name(detection::class_from_index(index));
    if (text != expected) {
      throw ParseError(path, lineno, "expected class '" + std::string(expected) + "', got '" +
                                         std::string(text) + "'");
    }
  }
  if (names.size() != static_cast<std::size_t>(detection::kNumClasses)) {
    throw ParseError(path, lineno, "expected " + std::to_string(detection::kNumClasses) +
                                       " class names, found " + std::to_string(names.size()));
  }
}

std::vector<AnnotationRecord> parse_label_file(const std::string& path,
                                               const std::string& image_id) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open label file");
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 5) {
      throw ParseError(path, lineno, "expected 'class_index cx cy w h', got " +
                                         std::to_string(tokens.size()) + " fields");
    }
    AnnotationRecord r;
    r.image_id = image_id;
    if (!parse_number(tokens[0], r.class_index)) {
      throw ParseError(path, lineno, "class index is not an integer");
    }
    if (r.class_index < 0 || r.class_index >= detection::kNumClasses) {
      throw ParseError(path, lineno,
                       "class index " + std::to_string(r.class_index) + " out of range [0, 11]");
    }
    std::array<double, 4> v{};
    for (std::size_t k = 0; k < 4; ++k) {
      if (!parse_number(tokens[k + 1], v[k]) || !std::isfinite(v[k])) {
        throw ParseError(path, lineno, "coordinate '" + std::string(tokens[k + 1]) +
                                           "' is not a number");
      }
      if (v[k] < 0.0 || v[k] > 1.0) {
        throw ParseError(path, lineno, "coordinate '" + std::string(tokens[k + 1]) +
                                           "' outside [0, 1]");
      }
    }
    r.bbox_norm = {v[0], v[1], v[2], v[3]};
    if (!(r.bbox_norm.w > 0.0) || !(r.bbox_norm.h > 0.0)) {
      throw ParseError(path, lineno, "box width and height must be positive");
    }
    const auto& b = r.bbox_norm;
    if (b.cx - b.w / 2.0 < -kUnitTolerance || b.cx + b.w / 2.0 > 1.0 + kUnitTolerance ||
        b.cy - b.h / 2.0 < -kUnitTolerance || b.cy + b.h / 2.0 > 1.0 + kUnitTolerance) {
      throw ParseError(path, lineno, "box exceeds the unit square");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AnnotationRecord> parse_annotations(const std::string& label_dir,
                                                const std::string& names_file) {
  check_names_file(names_file);
  const fs::path dir(label_dir);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ParseError(label_dir, 0, "not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, Season> seasons;
  const fs::path seasons_path = dir / "seasons.csv";
  if (fs::exists(seasons_path)) seasons = read_seasons(seasons_path);

  std::vector<AnnotationRecord> records;
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    auto recs = parse_label_file(file.string(), id);
    const auto it = seasons.find(id);
    for (auto& r : recs) {
      if (it != seasons.end()) r.season = it->second;
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::int64_t ClassDistribution::total() const {
  std::int64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

ClassDistribution class_distribution(const std::vector<AnnotationRecord>& records) {
  ClassDistribution d;
  std::map<Season, std::set<std::string>> images;
  for (const auto& r : records) {
    if (r.class_index < 0 || r.class_index >= detection::kNumClasses) {
      throw DomainError("class index out of range");
    }
    ++d.counts[static_cast<std::size_t>(r.class_index)];
    if (r.season) images[*r.season].insert(r.image_id);
  }
  for (const auto& [season, ids] : images) {
    d.images_per_season[season] = static_cast<std::int64_t>(ids.size());
  }
  std::int64_t lo = 0, hi = 0;
  for (auto c : d.counts) {
    if (c == 0) continue;
    lo = lo == 0 ? c : std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (lo > 0) d.imbalance_ratio = static_cast<double>(hi) / static_cast<double>(lo);
  return d;
}

Split split_dataset(const std::vector<AnnotationRecord>& records, double ratio,
                    std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("split ratio must lie in (0, 1)");
  std::vector<std::string> ids;
  {
    std::set<std::string> unique;
    for (const auto& r : records) unique.insert(r.image_id);
    ids.assign(unique.begin(), unique.end());
  }
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the order is portable.
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }
  std::size_t n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(ids.size()) * ratio + 1e-9));
  if (!ids.empty()) n_train = std::max<std::size_t>(n_train, 1);
  Split s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.eval.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  return s;
}

}  // namespace barrierfree::dataset
