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
#include "barrierfree/detection.hpp"

#include <algorithm>
#include <cmath>

#include "barrierfree/error.hpp"

namespace barrierfree::detection {
namespace {

constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "person_without_mobility_restrictions",
    "person_with_wheelchair",
    "person_with_rollator",
    "person_with_crutches",
    "person_with_blindstick",
    "person_with_luggage",
    "person_with_stroller",
    "person_with_bicycle",
    "person_with_luggage_trolley",
    "person_with_dog",
    "person_with_walking_stick",
    "car",
};

}  // namespace

const std::array<ObjectClass, kNumClasses>& all_classes() {
  static const std::array<ObjectClass, kNumClasses> classes = [] {
    std::array<ObjectClass, kNumClasses> out{};
    for (int i = 0; i < kNumClasses; ++i) out[i] = static_cast<ObjectClass>(i);
    return out;
  }();
  return classes;
}

int class_index(ObjectClass c) { return static_cast<int>(c); }

std::string_view class_name(ObjectClass c) { return kClassNames.at(class_index(c)); }

ObjectClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw DomainError("class index " + std::to_string(index) +
                      " outside [0, " + std::to_string(kNumClasses - 1) + "]");
  }
  return static_cast<ObjectClass>(index);
}

std::optional<ObjectClass> class_from_name(std::string_view name) {
  const auto it = std::find(kClassNames.begin(), kClassNames.end(), name);
  if (it == kClassNames.end()) return std::nullopt;
  return static_cast<ObjectClass>(it - kClassNames.begin());
}

std::string names_file_contents() {
  std::string out;
  for (auto name : kClassNames) {
    out += name;
    out += '\n';
  }
  return out;
}

std::string_view group_name(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return "walking";
    case MobilityGroup::kVisualImpairment: return "visual";
    case MobilityGroup::kMobilityBurden: return "burden";
    case MobilityGroup::kUnrestricted: return "unrestricted";
  }
  return "unrestricted";
}

std::optional<MobilityGroup> group_from_name(std::string_view name) {
  for (auto g : {MobilityGroup::kWalkingImpairment, MobilityGroup::kVisualImpairment,
                 MobilityGroup::kMobilityBurden, MobilityGroup::kUnrestricted}) {
    if (group_name(g) == name) return g;
  }
  return std::nullopt;
}

MobilityGroup group_of(ObjectClass c) {
  switch (c) {
    case ObjectClass::kPersonWithWheelchair:
    case ObjectClass::kPersonWithRollator:
    case ObjectClass::kPersonWithCrutches:
    case ObjectClass::kPersonWithWalkingStick:
      return MobilityGroup::kWalkingImpairment;
    case ObjectClass::kPersonWithBlindstick:
      return MobilityGroup::kVisualImpairment;
    case ObjectClass::kPersonWithLuggage:
    case ObjectClass::kPersonWithStroller:
    case ObjectClass::kPersonWithBicycle:
    case ObjectClass::kPersonWithLuggageTrolley:
    case ObjectClass::kPersonWithDog:
      return MobilityGroup::kMobilityBurden;
    case ObjectClass::kPersonWithoutMobilityRestrictions:
    case ObjectClass::kCar:
      return MobilityGroup::kUnrestricted;
  }
  return MobilityGroup::kUnrestricted;
}

bool is_restricted(MobilityGroup g) { return g != MobilityGroup::kUnrestricted; }

int max_extension_seconds(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kWalkingImpairment: return 6;
    case MobilityGroup::kVisualImpairment: return 8;
    case MobilityGroup::kMobilityBurden: return 3;
    case MobilityGroup::kUnrestricted: break;
  }
  throw DomainError("no green-time strategy for unrestricted pedestrians");
}

int priority_rank(MobilityGroup g) {
  switch (g) {
    case MobilityGroup::kVisualImpairment: return 0;
    case MobilityGroup::kWalkingImpairment: return 1;
    case MobilityGroup::kMobilityBurden: return 2;
    case MobilityGroup::kUnrestricted: break;
  }
  throw DomainError("unrestricted pedestrians have no priority rank");
}

BoundingBox::BoundingBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_max)) {
    throw DomainError("bounding box has a non-finite coordinate");
  }
  if (!(x_min < x_max && y_min < y_max)) {
    throw DomainError("bounding box needs x_min < x_max and y_min < y_max");
  }
}

BoundingBox BoundingBox::translated(double dx, double dy) const {
  return {x_min_ + dx, y_min_ + dy, x_max_ + dx, y_max_ + dy};
}

BoundingBox BoundingBox::scaled(double factor) const {
  return {x_min_ * factor, y_min_ * factor, x_max_ * factor, y_max_ * factor};
}

geometry::Point anchor_point(const BoundingBox& b) {
  return {(b.x_min() + b.x_max()) / 2.0, b.y_max()};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double ih = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

void Detection::validate() const {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw DomainError("detection confidence must lie in [0, 1]");
  }
  if (timestamp_ms < 0) throw DomainError("detection timestamp must be non-negative");
  class_from_index(class_index(object_class));
}

void FrameDetections::validate() const {
  if (timestamp_ms < 0) throw DomainError("frame timestamp must be non-negative");
  for (const auto& d : detections) {
    d.validate();
    if (d.camera_id != camera_id || d.timestamp_ms != timestamp_ms) {
      throw DomainError("frame contains a detection from another camera or time");
    }
  }
}

}  // namespace barrierfree::detection
