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

#include "goalpath/dataio.hpp"
#include "goalpath/features.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace goalpath
{
namespace
{

ActorState mover(Vec2 start, double heading, double speed)
{
  ActorState a;
  a.id = "t";
  const Vec2 dir = unit_from_heading(heading);
  for (int i = 0; i < 20; ++i) a.history.push_back(start + dir * (speed * 0.1 * (i - 19)));
  a.centroid = a.history.back();
  a.heading = heading;
  a.velocity = dir * speed;
  return a;
}

ReferencePath straight_path()
{
  const Polyline ends{{0, 0}, {100, 0}};
  return resample_polyline(ends, 1.0);
}

TEST(Features, RolloutConstantVelocity)
{
  const ActorState a = mover({0, 0}, 0.0, 10.0);
  const auto r = kinematic_rollout(a, straight_path());
  for (std::size_t i = 0; i < kRolloutLength; ++i) {
    EXPECT_NEAR(r.path_frame[i].along, 5.0 * i, 1e-12);
    EXPECT_EQ(r.path_frame[i].cross, 0.0);
    EXPECT_DOUBLE_EQ(r.path_frame[i].t, 0.5 * i);
  }
}

TEST(Features, RolloutStationary)
{
  ActorState a = mover({12.25, 0.5}, 0.0, 0.0);
  const auto r = kinematic_rollout(a, straight_path());
  for (const auto & w : r.path_frame) {
    EXPECT_EQ(w.along, 12.25);
    EXPECT_EQ(w.cross, 0.5);
  }
}

TEST(Features, RolloutConstantAcceleration)
{
  ActorState a = mover({0, 0}, 0.0, 5.0);
  a.acceleration = {1.0, 0.0};
  const auto r = kinematic_rollout(a, straight_path());
  EXPECT_NEAR(r.path_frame.back().along - r.path_frame.front().along, 48.0, 1e-12);
  const auto world = kinematic_future(a);
  ASSERT_EQ(world.size(), kFutureLength);
  EXPECT_NEAR(world.back().x, 48.0, 1e-12);
}

TEST(Features, EmptySceneStraightPathRasterIsZero)
{
  const ActorState target = mover({0, 0}, 0.0, 10.0);
  const auto raster = build_raster(straight_path(), {}, target, LaneMap{});
  for (double v : raster.cells) EXPECT_EQ(v, 0.0);
}

TEST(Features, NeighborCell)
{
  const ActorState target = mover({0, 0}, 0.0, 10.0);
  ActorState n = mover({10.5, 0.5}, 0.0, 3.0);
  n.id = "n";
  const std::vector<ActorState> scene{target, n};
  const auto raster = build_raster(straight_path(), scene, target, LaneMap{});
  EXPECT_EQ(raster.at(10, 2, kActorOccupancy), 1.0);
  EXPECT_DOUBLE_EQ(raster.at(10, 2, kActorSpeed), 3.0);
  double occupied = 0.0;
  for (std::size_t l = 0; l < PathRaster::kRows; ++l) {
    for (std::size_t w = 0; w < PathRaster::kCols; ++w) occupied += raster.at(l, w, kActorOccupancy);
  }
  EXPECT_EQ(occupied, 1.0);
}

TEST(Features, QuarterCircleCurvature)
{
  Polyline arc;
  for (int i = 0; i <= 2000; ++i) {
    const double a = std::numbers::pi / 2 * i / 2000.0;
    arc.push_back({20 * std::sin(a), 20 - 20 * std::cos(a)});
  }
  const auto path = resample_polyline(arc, 1.0);
  const ActorState target = mover({0, 0}, 0.0, 1.0);
  const auto raster = build_raster(path, {}, target, LaneMap{});
  for (std::size_t l = 1; l + 2 < path.size(); ++l) {
    for (std::size_t w = 0; w < PathRaster::kCols; ++w) {
      EXPECT_NEAR(raster.at(l, w, kCurvature), 0.05, 0.005) << l;
    }
  }
}

TEST(Features, ControlChannels)
{
  const auto map = LaneMap::from_lanes(
    {{"a", {{0, 0}, {100, 0}}, {}, {{ControlKind::kYieldSign, {{20, -1}, {23, -1}, {23, 1}, {20, 1}}}}}});
  const ActorState target = mover({0, 0}, 0.0, 10.0);
  const auto raster = build_raster(straight_path(), {}, target, map);
  for (std::size_t l = 0; l < PathRaster::kRows; ++l) {
    for (std::size_t w = 0; w < PathRaster::kCols; ++w) {
      const bool inside = l >= 20 && l < 23 && (w == 1 || w == 2);
      EXPECT_EQ(raster.at(l, w, kYieldSign), inside ? 1.0 : 0.0) << l << "," << w;
      EXPECT_EQ(raster.at(l, w, kStopSign), 0.0);
    }
  }
}

TEST(Features, KeepsTwentyClosestAndIgnoresOrder)
{
  const ActorState target = mover({0, 0}, 0.0, 10.0);
  std::vector<ActorState> scene{target};
  for (int i = 0; i < 25; ++i) {
    ActorState n = mover({2.0 + 3.0 * i, 0.2}, 0.0, 1.0 + i);
    n.id = "n" + std::to_string(100 + i);
    scene.push_back(n);
  }
  const auto raster = build_raster(straight_path(), scene, target, LaneMap{});
  double count = 0.0;
  for (std::size_t l = 0; l < PathRaster::kRows; ++l) count += raster.at(l, 2, kActorOccupancy);
  EXPECT_EQ(count, 20.0);
  EXPECT_EQ(raster.at(59, 2, kActorOccupancy), 1.0);
  EXPECT_EQ(raster.at(62, 2, kActorOccupancy), 0.0);

  std::reverse(scene.begin(), scene.end());
  EXPECT_EQ(build_raster(straight_path(), scene, target, LaneMap{}).cells, raster.cells);
}

TEST(Features, HistoryFrame)
{
  ActorState still = mover({4, 5}, 1.0, 0.0);
  for (const Vec2 & p : actor_history_features(still)) EXPECT_EQ(p, (Vec2{0, 0}));

  const auto east = actor_history_features(mover({0, 0}, 0.0, 1.0));
  const auto north = actor_history_features(mover({0, 0}, std::numbers::pi / 2, 1.0));
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(east[i].x, -0.1 * (19 - i), 1e-12);
    EXPECT_NEAR(east[i].y, 0.0, 1e-12);
    EXPECT_NEAR(north[i].x, east[i].x, 1e-12);
    EXPECT_NEAR(north[i].y, east[i].y, 1e-12);
  }
}

TEST(Features, StateFeaturesForStraightMotion)
{
  ActorState a = mover({0, 0}, 0.3, 8.0);
  a.acceleration = unit_from_heading(0.3) * 1.5 + unit_from_heading(0.3).left_normal() * -0.5;
  const auto s = actor_state_features(a);
  EXPECT_NEAR(s[0], 8.0, 1e-12);
  EXPECT_NEAR(s[1], 1.5, 1e-12);
  EXPECT_NEAR(s[2], -0.5, 1e-12);
  EXPECT_NEAR(s[3], 0.0, 1e-9);
}

TEST(Features, RigidTransformLeavesPathFeaturesUnchanged)
{
  const Scene scene = gen_scene("n_way4", 21);
  const auto & target = scene.target();
  const auto goals = propose_goal_paths(scene.map, target.centroid);
  ASSERT_FALSE(goals.empty());

  const Pose2 move{{37.0, -12.0}, 0.8};
  auto xf = [&](const Vec2 & p) { return move.to_world(p); };
  std::vector<Lane> lanes;
  for (const auto & [id, lane] : scene.map.lanes()) {
    Lane l = lane;
    for (Vec2 & p : l.centerline) p = xf(p);
    for (auto & c : l.controls) {
      for (Vec2 & p : c.region) p = xf(p);
    }
    lanes.push_back(l);
  }
  const LaneMap moved_map = LaneMap::from_lanes(lanes);
  std::vector<ActorState> moved_actors = scene.actors;
  for (ActorState & a : moved_actors) {
    a.centroid = xf(a.centroid);
    a.heading += move.heading;
    a.velocity = rotate(a.velocity, move.heading);
    a.acceleration = rotate(a.acceleration, move.heading);
    for (Vec2 & p : a.history) p = xf(p);
  }
  const ActorState & moved_target = moved_actors.front();
  const auto moved_goals = propose_goal_paths(moved_map, moved_target.centroid);
  ASSERT_EQ(moved_goals.size(), goals.size());
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const auto r0 = build_raster(goals[j].path, scene.actors, target, scene.map);
    const auto r1 = build_raster(moved_goals[j].path, moved_actors, moved_target, moved_map);
    for (std::size_t i = 0; i < r0.cells.size(); ++i) EXPECT_NEAR(r0.cells[i], r1.cells[i], 1e-9);
    const auto k0 = kinematic_rollout(target, goals[j].path);
    const auto k1 = kinematic_rollout(moved_target, moved_goals[j].path);
    for (std::size_t i = 0; i < kRolloutLength; ++i) {
      EXPECT_NEAR(k0.path_frame[i].along, k1.path_frame[i].along, 1e-9);
      EXPECT_NEAR(k0.path_frame[i].cross, k1.path_frame[i].cross, 1e-9);
    }
  }
}

TEST(Features, ValidateRejectsBadLengths)
{
  ActorState a = mover({0, 0}, 0.0, 1.0);
  a.history.pop_back();
  EXPECT_THROW(a.validate(), std::exception);
  ActorState b = mover({0, 0}, 0.0, 1.0);
  b.future = std::vector<Vec2>(11);
  EXPECT_THROW(b.validate(), std::exception);
}

}  // namespace
}  // namespace goalpath
