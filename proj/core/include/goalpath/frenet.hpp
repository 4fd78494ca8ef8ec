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

#ifndef GOALPATH__FRENET_HPP_
#define GOALPATH__FRENET_HPP_

#include "goalpath/geometry.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace goalpath
{

struct CartesianWaypoint
{
  double t{0.0};
  Vec2 position;
};

// Waypoints in the world frame, uniformly spaced in time.
using CartesianTrajectory = std::vector<CartesianWaypoint>;

struct PathWaypoint
{
  double t{0.0};
  double along{0.0};
  // Signed; positive to the left of the direction of travel along the path.
  double cross{0.0};
};

struct PathFrameTrajectory
{
  std::vector<PathWaypoint> waypoints;
  std::string reference;
};

/// A polyline with cumulative arclength ("stations") at each vertex.
///
/// Vertex k sits at station k * spacing for paths produced by
/// resample_polyline(), so the along-track coordinate of a projected point is
/// the station of the preceding vertex plus the distance from that vertex.
class ReferencePath
{
public:
  ReferencePath() = default;
  // Stations are accumulated from segment lengths.
  explicit ReferencePath(Polyline points);
  ReferencePath(Polyline points, std::vector<double> stations);

  const Polyline & points() const { return points_; }
  const std::vector<double> & stations() const { return stations_; }
  std::size_t size() const { return points_.size(); }
  double length() const { return stations_.empty() ? 0.0 : stations_.back(); }

  // Unit direction of segment i (from vertex i to vertex i + 1).
  Vec2 segment_direction(std::size_t i) const;

  // Point at arclength s; values past the end extrapolate along the final
  // segment. Requires s >= 0.
  Vec2 point_at(double s) const;

private:
  Polyline points_;
  std::vector<double> stations_;
};

struct PathProjection
{
  // Index of the vertex preceding the closest point, in [0, size() - 2].
  std::size_t segment_index{0};
  Vec2 closest_point;
  double along{0.0};
  double cross{0.0};
};

// Globally closest point over all segments. On exact ties the lower segment
// index wins. A point whose closest point is the final vertex keeps
// segment_index = size() - 2 and its along-track value continues past the end
// along the final segment direction; a point behind the first vertex gets
// along = 0.
PathProjection closest_point_on_path(const ReferencePath & path, const Vec2 & p);

PathFrameTrajectory project(const ReferencePath & path, const CartesianTrajectory & trajectory);

// Inverse of project() away from corner ties. Throws on negative along-track
// values.
CartesianTrajectory unproject(const ReferencePath & path, const PathFrameTrajectory & trajectory);

Vec2 unproject_point(const ReferencePath & path, double along, double cross);

// Places points on the input polyline so that consecutive points are exactly
// `spacing` apart; the resampled path's arclength at vertex k is k * spacing.
// The first point is kept, and the last input point is appended (possibly
// closer than `spacing`) unless it already lies within 1e-9 of the final one.
ReferencePath resample_polyline(std::span<const Vec2> points, double spacing);

}  // namespace goalpath

#endif  // GOALPATH__FRENET_HPP_
