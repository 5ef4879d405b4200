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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "barrierfree/geometry.hpp"

namespace barrierfree::detection {

// Indices are fixed by the annotation scheme and never change.
enum class ObjectClass : int {
  kPersonWithoutMobilityRestrictions = 0,
  kPersonWithWheelchair = 1,
  kPersonWithRollator = 2,
  kPersonWithCrutches = 3,
  kPersonWithBlindstick = 4,
  kPersonWithLuggage = 5,
  kPersonWithStroller = 6,
  kPersonWithBicycle = 7,
  kPersonWithLuggageTrolley = 8,
  kPersonWithDog = 9,
  kPersonWithWalkingStick = 10,
  kCar = 11,
};

inline constexpr int kNumClasses = 12;

enum class MobilityGroup {
  kWalkingImpairment,
  kVisualImpairment,
  kMobilityBurden,
  kUnrestricted,
};

// The three groups that trigger a signal strategy, in priority order.
inline constexpr std::array<MobilityGroup, 3> kRestrictedGroups = {
    MobilityGroup::kVisualImpairment,
    MobilityGroup::kWalkingImpairment,
    MobilityGroup::kMobilityBurden,
};

const std::array<ObjectClass, kNumClasses>& all_classes();

std::string_view class_name(ObjectClass c);
int class_index(ObjectClass c);
// Throws DomainError outside [0, 11].
ObjectClass class_from_index(int index);
std::optional<ObjectClass> class_from_name(std::string_view name);

// Twelve lines, one class name per line, line number = class index.
std::string names_file_contents();

std::string_view group_name(MobilityGroup g);
std::optional<MobilityGroup> group_from_name(std::string_view name);

MobilityGroup group_of(ObjectClass c);
bool is_restricted(MobilityGroup g);

// Green-time extension caps in whole seconds: walking 6, visual 8,
// burden 3. Throws DomainError for kUnrestricted.
int max_extension_seconds(MobilityGroup g);

// 0 is the highest priority: visual, then walking, then burden.
// Throws DomainError for kUnrestricted.
int priority_rank(MobilityGroup g);

// Pixel box. Area uses width = x_max - x_min; zero-area boxes are rejected.
class BoundingBox {
 public:
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }

  BoundingBox translated(double dx, double dy) const;
  BoundingBox scaled(double factor) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

// Middle of the bottom edge: ((x_min + x_max) / 2, y_max).
geometry::Point anchor_point(const BoundingBox& b);

double iou(const BoundingBox& a, const BoundingBox& b);

struct Detection {
  ObjectClass object_class = ObjectClass::kPersonWithoutMobilityRestrictions;
  BoundingBox bbox{0, 0, 1, 1};
  double confidence = 0.0;
  int camera_id = 0;
  std::int64_t timestamp_ms = 0;

  // confidence in [0,1], timestamp >= 0.
  void validate() const;
};

// All detections of one camera frame. An empty list is a frame in which
// nothing was detected.
struct FrameDetections {
  int camera_id = 0;
  std::int64_t timestamp_ms = 0;
  std::vector<Detection> detections;

  // Every detection must carry the frame's camera_id and timestamp.
  void validate() const;
};

}  // namespace barrierfree::detection
