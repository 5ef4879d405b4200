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
#include "barrierfree/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "barrierfree/error.hpp"

namespace barrierfree::geometry {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(const Point& o, const Point& a, const Point& b) {
  const double c = cross(o, a, b);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

bool within_box(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed segments [a, b] and [c, d] share at least one point.
bool segments_intersect(const Point& a, const Point& b, const Point& c,
                        const Point& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(a, b, c)) return true;
  if (o2 == 0 && within_box(a, b, d)) return true;
  if (o3 == 0 && within_box(c, d, a)) return true;
  if (o4 == 0 && within_box(c, d, b)) return true;
  return false;
}

double shoelace(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

}  // namespace

PolygonZone PolygonZone::translated(double dx, double dy) const {
  std::vector<Point> moved(vertices_.begin(), vertices_.end());
  for (Point& p : moved) {
    p.x += dx;
    p.y += dy;
  }
  return validate_polygon(std::move(moved), id_);
}

PolygonZone validate_polygon(std::vector<Point> vertices, std::string id) {
  const std::size_t n = vertices.size();
  if (n < 3) {
    throw GeometryError("polygon '" + id + "' needs at least 3 vertices, got " +
                        std::to_string(n));
  }
  double extent = 0.0;
  for (const Point& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("polygon '" + id + "' has a non-finite vertex");
    }
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices[i] == vertices[(i + 1) % n]) {
      throw GeometryError("polygon '" + id + "' has a repeated vertex at index " +
                          std::to_string(i));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point& c = vertices[j];
      const Point& d = vertices[(j + 1) % n];
      const bool next = j == i + 1;
      const bool wraps = i == 0 && j == n - 1;
      if (next || wraps) {
        // Neighbours share one vertex; they may only meet there, so the
        // far endpoint of either edge must not lie on the other.
        const Point& far_ij = next ? a : b;
        const Point& far_jk = next ? d : c;
        if ((orientation(c, d, far_ij) == 0 && within_box(c, d, far_ij)) ||
            (orientation(a, b, far_jk) == 0 && within_box(a, b, far_jk))) {
          throw GeometryError("polygon '" + id + "' folds back on itself at edge " +
                              std::to_string(i));
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        throw GeometryError("polygon '" + id + "' is self-intersecting (edges " +
                            std::to_string(i) + " and " + std::to_string(j) + ")");
      }
    }
  }

  const double area = shoelace(vertices);
  const double scale = std::max(extent * extent, 1e-300);
  if (std::abs(area) <= 1e-12 * scale) {
    throw GeometryError("polygon '" + id + "' has zero area");
  }
  return PolygonZone(std::move(id), std::move(vertices), area);
}

PolygonZone rectangle_zone(double x_min, double y_min, double x_max,
                           double y_max, std::string id) {
  return validate_polygon(
      {{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}},
      std::move(id));
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  const double dist2 = (p.x - a.x) * (p.x - a.x) + (p.y - a.y) * (p.y - a.y);
  const double c = cross(a, b, p);
  if (std::abs(c) > 1e-12 * (len2 + dist2)) return false;
  const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
  return dot >= 0.0 && dot <= len2;
}

bool contains(const PolygonZone& zone, const Point& p) {
  const auto v = zone.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(v[i], v[(i + 1) % n], p)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace barrierfree::geometry
