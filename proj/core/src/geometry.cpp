// Copyright 2026 The goalpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "goalpath/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace goalpath
{

double polyline_length(std::span<const Vec2> points)
{
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += distance(points[i - 1], points[i]);
  }
  return total;
}

Vec2 closest_point_on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p, double * t)
{
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double u = 0.0;
  if (len2 > 0.0) {
    u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  }
  if (t != nullptr) {
    *t = u;
  }
  if (u == 1.0) {
    return b;
  }
  return a + ab * u;
}

double mean_distance(std::span<const Vec2> a, std::span<const Vec2> b)
{
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("mean_distance: length mismatch or empty input");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += distance(a[i], b[i]);
  }
  return total / static_cast<double>(a.size());
}

double distance_to_polyline(std::span<const Vec2> points, const Vec2 & p)
{
  if (points.size() == 1) {
    return distance(points.front(), p);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    best = std::min(best, distance(closest_point_on_segment(points[i], points[i + 1], p), p));
  }
  return best;
}

bool point_in_polygon(std::span<const Vec2> polygon, const Vec2 & p)
{
  // Even-odd ray casting.
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 & a = polygon[i];
    const Vec2 & b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

namespace
{

int orientation(const Vec2 & a, const Vec2 & b, const Vec2 & c)
{
  const double v = (b - a).cross(c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2 & p1, const Vec2 & p2, const Vec2 & q1, const Vec2 & q2)
{
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(std::span<const Vec2> polygon)
{
  const std::size_t n = polygon.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a1 = polygon[i];
    const Vec2 & a2 = polygon[(i + 1) % n];
    if (a1 == a2) {
      return false;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (segments_intersect(a1, a2, polygon[j], polygon[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace goalpath
