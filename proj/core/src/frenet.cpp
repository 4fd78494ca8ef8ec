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

#include "goalpath/frenet.hpp"

#include "goalpath/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace goalpath
{

namespace
{

void check_polyline(const Polyline & points)
{
  if (points.size() < 2) {
    throw data_error("reference path needs at least 2 points, got " + std::to_string(points.size()));
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1]) {
      throw data_error("reference path has repeated vertex at index " + std::to_string(i));
    }
  }
}

}  // namespace

ReferencePath::ReferencePath(Polyline points) : points_(std::move(points))
{
  check_polyline(points_);
  stations_.resize(points_.size());
  stations_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    stations_[i] = stations_[i - 1] + distance(points_[i - 1], points_[i]);
  }
}

ReferencePath::ReferencePath(Polyline points, std::vector<double> stations)
: points_(std::move(points)), stations_(std::move(stations))
{
  check_polyline(points_);
  if (stations_.size() != points_.size()) {
    throw data_error("station count does not match point count");
  }
}

Vec2 ReferencePath::segment_direction(std::size_t i) const
{
  const Vec2 d = points_[i + 1] - points_[i];
  return d * (1.0 / d.norm());
}

Vec2 ReferencePath::point_at(double s) const
{
  if (s < 0.0) {
    throw data_error("negative along-track value " + std::to_string(s));
  }
  // Lower-bound lookup so a value sitting exactly on a vertex resolves to the
  // preceding segment, matching the tie rule of closest_point_on_path().
  const auto it = std::lower_bound(stations_.begin(), stations_.end(), s);
  std::size_t i = it == stations_.begin() ? 0 : static_cast<std::size_t>(it - stations_.begin()) - 1;
  i = std::min(i, points_.size() - 2);
  return points_[i] + segment_direction(i) * (s - stations_[i]);
}

PathProjection closest_point_on_path(const ReferencePath & path, const Vec2 & p)
{
  const auto & pts = path.points();
  const std::size_t last_segment = pts.size() - 2;

  PathProjection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (std::size_t i = 0; i <= last_segment; ++i) {
    double t = 0.0;
    const Vec2 q = closest_point_on_segment(pts[i], pts[i + 1], p, &t);
    const Vec2 diff = p - q;
    const double d2 = diff.dot(diff);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = t;
      best.segment_index = i;
      best.closest_point = q;
    }
  }

  const std::size_t i = best.segment_index;
  const Vec2 dir = path.segment_direction(i);
  if (i == last_segment && best_t == 1.0) {
    best.along = path.stations()[i] + (p - pts[i]).dot(dir);
  } else if (i == 0 && best_t == 0.0) {
    best.along = 0.0;
  } else {
    best.along = path.stations()[i] + distance(pts[i], best.closest_point);
  }
  best.cross = (p - best.closest_point).dot(dir.left_normal());
  return best;
}

PathFrameTrajectory project(const ReferencePath & path, const CartesianTrajectory & trajectory)
{
  PathFrameTrajectory out;
  out.waypoints.reserve(trajectory.size());
  for (const auto & wp : trajectory) {
    const PathProjection proj = closest_point_on_path(path, wp.position);
    out.waypoints.push_back({wp.t, proj.along, proj.cross});
  }
  return out;
}

Vec2 unproject_point(const ReferencePath & path, double along, double cross)
{
  if (along < 0.0) {
    throw data_error("negative along-track value " + std::to_string(along));
  }
  const auto & st = path.stations();
  const auto it = std::lower_bound(st.begin(), st.end(), along);
  std::size_t i = it == st.begin() ? 0 : static_cast<std::size_t>(it - st.begin()) - 1;
  i = std::min(i, path.size() - 2);
  const Vec2 dir = path.segment_direction(i);
  const Vec2 base = path.points()[i] + dir * (along - st[i]);
  return base + dir.left_normal() * cross;
}

CartesianTrajectory unproject(const ReferencePath & path, const PathFrameTrajectory & trajectory)
{
  CartesianTrajectory out;
  out.reserve(trajectory.waypoints.size());
  for (const auto & wp : trajectory.waypoints) {
    out.push_back({wp.t, unproject_point(path, wp.along, wp.cross)});
  }
  return out;
}

ReferencePath resample_polyline(std::span<const Vec2> points, double spacing)
{
  if (!(spacing > 0.0)) {
    throw data_error("resample spacing must be positive");
  }
  // Drop zero-length segments up front.
  Polyline clean;
  clean.reserve(points.size());
  for (const auto & p : points) {
    if (clean.empty() || !(clean.back() == p)) {
      clean.push_back(p);
    }
  }
  if (clean.size() < 2) {
    throw data_error("cannot resample a zero-length polyline");
  }

  // Each new point is where the source leaves the circle of radius `spacing`
  // around the previous one, so consecutive points are exactly one spacing
  // apart and the resampled arclength is a multiple of it.
  Polyline out{clean.front()};
  Vec2 q = clean.front();
  std::size_t seg = 0;
  // q sits at entry + steps * spacing from the start of its segment.
  double entry = 0.0;
  std::size_t steps = 0;
  while (true) {
    const double len = distance(clean[seg], clean[seg + 1]);
    const double offset = entry + static_cast<double>(steps + 1) * spacing;
    if (offset <= len) {
      ++steps;
      q = clean[seg] + (clean[seg + 1] - clean[seg]) * (offset / len);
      out.push_back(q);
      continue;
    }
    std::size_t j = seg + 1;
    while (j + 1 < clean.size() && distance(clean[j + 1], q) < spacing) ++j;
    if (j + 1 >= clean.size()) break;
    // Larger root of |a + u d| = spacing; segment j starts inside the circle.
    const Vec2 a = clean[j] - q;
    const Vec2 d = clean[j + 1] - clean[j];
    const double qa = d.dot(d);
    const double qb = 2.0 * a.dot(d);
    const double qc = a.dot(a) - spacing * spacing;
    const double u = std::clamp((-qb + std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc))) / (2.0 * qa), 0.0, 1.0);
    seg = j;
    entry = u * std::sqrt(qa);
    steps = 0;
    q = clean[j] + d * u;
    out.push_back(q);
  }
  if (distance(out.back(), clean.back()) > 1e-9) {
    out.push_back(clean.back());
  }
  if (out.size() < 2) {
    throw data_error("resampled polyline is degenerate");
  }
  std::vector<double> stations(out.size());
  for (std::size_t i = 1; i < out.size(); ++i) {
    // Only the final segment may be shorter than one spacing.
    stations[i] = i + 1 < out.size() ? static_cast<double>(i) * spacing : stations[i - 1] + distance(out[i - 1], out[i]);
  }
  return ReferencePath(std::move(out), std::move(stations));
}

}  // namespace goalpath
