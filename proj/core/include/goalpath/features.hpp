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

#ifndef GOALPATH__FEATURES_HPP_
#define GOALPATH__FEATURES_HPP_

#include "goalpath/frenet.hpp"
#include "goalpath/geometry.hpp"
#include "goalpath/lane_map.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace goalpath
{

inline constexpr std::size_t kHistoryLength = 20;
inline constexpr double kHistoryStep = 0.1;
inline constexpr std::size_t kFutureLength = 12;
inline constexpr double kFutureStep = 0.5;
// Rollout covers t = 0 .. 6 s, so it has one more point than the future.
inline constexpr std::size_t kRolloutLength = kFutureLength + 1;

struct ActorState
{
  std::string id;
  Vec2 centroid;
  double heading{0.0};
  Vec2 velocity;
  Vec2 acceleration;
  // Oldest first at 10 Hz; the last entry is the current position.
  std::vector<Vec2> history;
  // Ground truth at t = 0.5, 1.0, ..., 6.0 s when labeled.
  std::optional<std::vector<Vec2>> future;
  bool is_target{false};
  bool is_parked{false};

  Pose2 pose() const { return {centroid, heading}; }
  // Throws Error(kData) when history or future have the wrong length or
  // contain non-finite values.
  void validate() const;
  CartesianTrajectory future_trajectory() const;
};

enum RasterChannel : std::size_t {
  kCurvature = 0,
  kActorOccupancy,
  kActorSpeed,
  kStopSign,
  kYieldSign,
  kLightGreen,
  kLightRed,
  kLightOther,
};

/// Along-path raster: rows index along-track meters, columns index cross-track
/// meters with the path on the boundary between columns 1 and 2.
struct PathRaster
{
  static constexpr std::size_t kRows = 80;
  static constexpr std::size_t kCols = 4;
  static constexpr std::size_t kChannels = 8;
  static constexpr double kCrossMin = -2.0;

  std::array<double, kRows * kCols * kChannels> cells{};

  double & at(std::size_t row, std::size_t col, std::size_t channel)
  {
    return cells[(row * kCols + col) * kChannels + channel];
  }
  double at(std::size_t row, std::size_t col, std::size_t channel) const
  {
    return cells[(row * kCols + col) * kChannels + channel];
  }
};

struct KinematicRollout
{
  // t = 0, 0.5, ..., 6.0 s in the path frame.
  std::array<PathWaypoint, kRolloutLength> path_frame{};
};

inline constexpr std::size_t kMaxRasterActors = 20;

// Constant-acceleration positions s0 + v0 t + a0 t^2 / 2 in the world frame.
Vec2 kinematic_position(const ActorState & actor, double t);

// World-frame rollout at the future timestamps (0.5 .. 6.0 s).
std::vector<Vec2> kinematic_future(const ActorState & actor);

KinematicRollout kinematic_rollout(const ActorState & actor, const ReferencePath & path);

PathRaster build_raster(
  const ReferencePath & path, std::span<const ActorState> scene_actors, const ActorState & target,
  const LaneMap & map);

// History in the actor-centric frame (origin at the centroid, +x along the
// heading), oldest first.
std::array<Vec2, kHistoryLength> actor_history_features(const ActorState & actor);

// [speed, longitudinal acceleration, lateral acceleration, yaw rate].
inline constexpr std::size_t kStateFeatureSize = 4;
std::array<double, kStateFeatureSize> actor_state_features(const ActorState & actor);

}  // namespace goalpath

#endif  // GOALPATH__FEATURES_HPP_
