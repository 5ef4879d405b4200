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
#include <vector>

namespace barrierfree::geometry {

// Image-plane pixels or ground-plane meters, depending on the caller.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// A simple polygon with non-zero area. Only validate_polygon creates one.
class PolygonZone {
 public:
  const std::string& id() const { return id_; }
  std::span<const Point> vertices() const { return vertices_; }
  double signed_area() const { return signed_area_; }

  PolygonZone translated(double dx, double dy) const;

 private:
  friend PolygonZone validate_polygon(std::vector<Point> vertices,
                                      std::string id);
  PolygonZone(std::string id, std::vector<Point> vertices, double area)
      : id_(std::move(id)), vertices_(std::move(vertices)), signed_area_(area) {}

  std::string id_;
  std::vector<Point> vertices_;
  double signed_area_ = 0.0;
};

// Throws GeometryError for fewer than three vertices, non-finite
// coordinates, zero area, or any pair of edges that cross or overlap.
PolygonZone validate_polygon(std::vector<Point> vertices, std::string id = {});

// Axis-aligned rectangle helper.
PolygonZone rectangle_zone(double x_min, double y_min, double x_max,
                           double y_max, std::string id = {});

// Ray-casting parity test. Points on an edge or vertex count as inside.
bool contains(const PolygonZone& zone, const Point& p);

// True when p lies on segment [a, b] (within a relative tolerance).
bool on_segment(const Point& a, const Point& b, const Point& p);

}  // namespace barrierfree::geometry
