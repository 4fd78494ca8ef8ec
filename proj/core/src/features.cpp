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

#include "goalpath/features.hpp"

#include "goalpath/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace goalpath
{

namespace
{

bool finite(const Vec2 & p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Heading of `to - from`, or nullopt when the displacement is too short to
// carry a direction.
std::optional<double> displacement_heading(const Vec2 & from, const Vec2 & to)
{
  const Vec2 d = to - from;
  if (d.norm() < 0.5) {
    return std::nullopt;
  }
  return std::atan2(d.y, d.x);
}

}  // namespace

void ActorState::validate() const
{
  if (history.size() != kHistoryLength) {
    throw data_error(
      "actor " + id + ": history must have " + std::to_string(kHistoryLength) + " points, got " +
      std::to_string(history.size()));
  }
  if (future && future->size() != kFutureLength) {
    throw data_error(
      "actor " + id + ": future must have " + std::to_string(kFutureLength) + " points, got " +
      std::to_string(future->size()));
  }
  bool ok = finite(centroid) && finite(velocity) && finite(acceleration) && std::isfinite(heading);
  for (const auto & p : history) ok = ok && finite(p);
  if (future) {
    for (const auto & p : *future) ok = ok && finite(p);
  }
  if (!ok) {
    throw data_error("actor " + id + ": non-finite state");
  }
}

CartesianTrajectory ActorState::future_trajectory() const
{
  CartesianTrajectory out;
  if (!future) {
    return out;
  }
  out.reserve(future->size());
  for (std::size_t i = 0; i < future->size(); ++i) {
    out.push_back({kFutureStep * static_cast<double>(i + 1), (*future)[i]});
  }
  return out;
}

Vec2 kinematic_position(const ActorState & actor, double t)
{
  return actor.centroid + actor.velocity * t + actor.acceleration * (0.5 * t * t);
}

std::vector<Vec2> kinematic_future(const ActorState & actor)
{
  std::vector<Vec2> out;
  out.reserve(kFutureLength);
  for (std::size_t i = 1; i <= kFutureLength; ++i) {
    out.push_back(kinematic_position(actor, kFutureStep * static_cast<double>(i)));
  }
  return out;
}

KinematicRollout kinematic_rollout(const ActorState & actor, const ReferencePath & path)
{
  KinematicRollout rollout;
  for (std::size_t i = 0; i < kRolloutLength; ++i) {
    const double t = kFutureStep * static_cast<double>(i);
    const PathProjection proj = closest_point_on_path(path, kinematic_position(actor, t));
    rollout.path_frame[i] = {t, proj.along, proj.cross};
  }
  return rollout;
}

PathRaster build_raster(
  const ReferencePath & path, std::span<const ActorState> scene_actors, const ActorState & target,
  const LaneMap & map)
{
  PathRaster raster;
  const auto & pts = path.points();
  const std::size_t n = pts.size();

  // Signed heading change per meter at each interior vertex.
  std::vector<double> curvature(PathRaster::kRows, 0.0);
  for (std::size_t l = 1; l + 1 < n && l < PathRaster::kRows; ++l) {
    const Vec2 d0 = pts[l] - pts[l - 1];
    const Vec2 d1 = pts[l + 1] - pts[l];
    const double turn = wrap_angle(std::atan2(d1.y, d1.x) - std::atan2(d0.y, d0.x));
    curvature[l] = turn / (0.5 * (d0.norm() + d1.norm()));
  }
  if (n > 2) {
    curvature[0] = curvature[1];
  }
  for (std::size_t l = 0; l < PathRaster::kRows; ++l) {
    for (std::size_t w = 0; w < PathRaster::kCols; ++w) {
      raster.at(l, w, kCurvature) = curvature[l];
    }
  }

  // The closest actors to the target, ties broken by id.
  std::vector<std::tuple<double, std::string, const ActorState *>> neighbors;
  for (const auto & actor : scene_actors) {
    if (actor.id == target.id) continue;
    neighbors.emplace_back(distance(actor.centroid, target.centroid), actor.id, &actor);
  }
  std::sort(neighbors.begin(), neighbors.end(), [](const auto & a, const auto & b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  if (neighbors.size() > kMaxRasterActors) {
    neighbors.resize(kMaxRasterActors);
  }
  const Vec2 first_dir = path.segment_direction(0);
  for (const auto & [dist, id, actor] : neighbors) {
    if ((actor->centroid - pts[0]).dot(first_dir) < 0.0) {
      continue;  // behind the path start
    }
    const PathProjection proj = closest_point_on_path(path, actor->centroid);
    const double col_pos = proj.cross - PathRaster::kCrossMin;
    if (proj.along < 0.0 || proj.along >= static_cast<double>(PathRaster::kRows) || col_pos < 0.0 ||
        col_pos >= static_cast<double>(PathRaster::kCols)) {
      continue;
    }
    const auto l = static_cast<std::size_t>(std::floor(proj.along));
    const auto w = static_cast<std::size_t>(std::floor(col_pos));
    raster.at(l, w, kActorOccupancy) = 1.0;
    raster.at(l, w, kActorSpeed) = std::max(raster.at(l, w, kActorSpeed), actor->velocity.norm());
  }

  std::vector<const TrafficControl *> controls;
  for (const auto & [lane_id, lane] : map.lanes()) {
    for (const auto & c : lane.controls) controls.push_back(&c);
  }
  if (!controls.empty()) {
    for (std::size_t l = 0; l < PathRaster::kRows; ++l) {
      for (std::size_t w = 0; w < PathRaster::kCols; ++w) {
        const Vec2 center = unproject_point(
          path, static_cast<double>(l) + 0.5, static_cast<double>(w) + PathRaster::kCrossMin + 0.5);
        for (const auto * c : controls) {
          if (point_in_polygon(c->region, center)) {
            raster.at(l, w, kStopSign + static_cast<std::size_t>(c->kind)) = 1.0;
          }
        }
      }
    }
  }
  return raster;
}

std::array<Vec2, kHistoryLength> actor_history_features(const ActorState & actor)
{
  if (actor.history.size() != kHistoryLength) {
    throw data_error("actor " + actor.id + ": history must have 20 points");
  }
  std::array<Vec2, kHistoryLength> out;
  const Pose2 pose = actor.pose();
  for (std::size_t i = 0; i < kHistoryLength; ++i) {
    out[i] = pose.to_local(actor.history[i]);
  }
  return out;
}

std::array<double, kStateFeatureSize> actor_state_features(const ActorState & actor)
{
  const Vec2 forward = unit_from_heading(actor.heading);
  double yaw_rate = 0.0;
  if (actor.history.size() == kHistoryLength) {
    // Headings over the older and the newer half of the history, 1 s apart.
    const auto early = displacement_heading(actor.history[4], actor.history[9]);
    const auto late = displacement_heading(actor.history[14], actor.history[19]);
    if (early && late) {
      yaw_rate = wrap_angle(*late - *early) / (10.0 * kHistoryStep);
    }
  }
  return {
    actor.velocity.norm(), actor.acceleration.dot(forward),
    actor.acceleration.dot(forward.left_normal()), yaw_rate};
}

}  // namespace goalpath
