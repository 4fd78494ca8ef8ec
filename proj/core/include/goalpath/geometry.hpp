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

#ifndef GOALPATH__GEOMETRY_HPP_
#define GOALPATH__GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace goalpath
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2 &) const = default;

  constexpr double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  constexpr double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  // Rotated by +90 degrees (points to the left of this direction).
  constexpr Vec2 left_normal() const { return {-y, x}; }
};

constexpr Vec2 operator*(double s, const Vec2 & v) { return v * s; }

inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

inline Vec2 rotate(const Vec2 & v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double angle)
{
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) {
    a += 2.0 * std::numbers::pi;
  }
  return a;
}

// Rigid 2D pose used for actor-centric frames.
struct Pose2
{
  Vec2 origin;
  double heading{0.0};

  Vec2 to_local(const Vec2 & world) const { return rotate(world - origin, -heading); }
  Vec2 to_world(const Vec2 & local) const { return origin + rotate(local, heading); }
};

using Polyline = std::vector<Vec2>;

double polyline_length(std::span<const Vec2> points);

// Closest point on segment [a, b]; `t` receives the clamped parameter in [0, 1].
Vec2 closest_point_on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p, double * t = nullptr);

// Mean pointwise Euclidean distance between equally long point sequences.
double mean_distance(std::span<const Vec2> a, std::span<const Vec2> b);

double distance_to_polyline(std::span<const Vec2> points, const Vec2 & p);

bool point_in_polygon(std::span<const Vec2> polygon, const Vec2 & p);

// True when no two non-adjacent edges of the closed polygon intersect.
bool is_simple_polygon(std::span<const Vec2> polygon);

}  // namespace goalpath

#endif  // GOALPATH__GEOMETRY_HPP_
