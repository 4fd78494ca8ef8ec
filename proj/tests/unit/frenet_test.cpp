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

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace goalpath
{
namespace
{

ReferencePath straight(double length)
{
  const Polyline ends{{0, 0}, {length, 0}};
  return resample_polyline(ends, 1.0);
}

ReferencePath quarter_circle(double radius, double spacing)
{
  Polyline dense;
  for (int i = 0; i <= 20000; ++i) {
    const double a = std::numbers::pi / 2 * i / 20000.0;
    dense.push_back({radius * std::sin(a), radius - radius * std::cos(a)});
  }
  return resample_polyline(dense, spacing);
}

CartesianTrajectory timed(const Polyline & pts)
{
  CartesianTrajectory out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back({0.5 * (i + 1), pts[i]});
  return out;
}

TEST(Frenet, AxisAlignedProjection)
{
  const auto path = straight(10);
  const PathProjection p = closest_point_on_path(path, {3.5, 2.0});
  EXPECT_EQ(p.segment_index, 3u);
  EXPECT_EQ(p.closest_point, (Vec2{3.5, 0.0}));
  EXPECT_DOUBLE_EQ(p.along, 3.5);
  EXPECT_DOUBLE_EQ(p.cross, 2.0);
}

TEST(Frenet, PointOnPathHasZeroCross)
{
  const auto path = quarter_circle(20, 1.0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    EXPECT_EQ(closest_point_on_path(path, path.points()[i]).cross, 0.0);
  }
}

TEST(Frenet, LShapeMatchesDenseOracle)
{
  const Polyline corner{{0, 0}, {10, 0}, {10, 10}};
  const ReferencePath path(corner);
  const Vec2 p{11, -1};
  const auto hit = oracle::dense_closest(corner, p);
  const auto proj = closest_point_on_path(path, p);
  EXPECT_NEAR(proj.along, hit.along, 1e-3);
  EXPECT_NEAR(std::abs(proj.cross), std::abs(hit.cross), 1e-3);
  // Outside the corner the offset is measured along the first segment's normal.
  EXPECT_EQ(proj.segment_index, 0u);
  EXPECT_NEAR(proj.cross, -1.0, 1e-12);
}

TEST(Frenet, ProjectPositiveCrossIsLeft)
{
  const auto path = straight(10);
  const auto out = project(path, timed({{1, 1}, {2, 1}}));
  ASSERT_EQ(out.waypoints.size(), 2u);
  EXPECT_DOUBLE_EQ(out.waypoints[0].along, 1.0);
  EXPECT_DOUBLE_EQ(out.waypoints[1].along, 2.0);
  EXPECT_DOUBLE_EQ(out.waypoints[0].cross, 1.0);
  EXPECT_DOUBLE_EQ(out.waypoints[1].cross, 1.0);
  EXPECT_DOUBLE_EQ(out.waypoints[1].t, 1.0);
}

TEST(Frenet, TrajectoryOnPathIsMonotoneWithZeroCross)
{
  const auto path = straight(30);
  Polyline pts;
  for (int i = 0; i < 12; ++i) pts.push_back({1.0 + 2.0 * i, 0.0});
  const auto out = project(path, timed(pts));
  for (std::size_t i = 0; i < out.waypoints.size(); ++i) {
    EXPECT_EQ(out.waypoints[i].cross, 0.0);
    if (i > 0) {
      EXPECT_GT(out.waypoints[i].along, out.waypoints[i - 1].along);
    }
  }
}

TEST(Frenet, QuarterCircleChordMatchesDenseOracle)
{
  const auto path = quarter_circle(20, 1.0);
  const Vec2 a = path.points().front();
  const Vec2 b = path.points().back();
  for (int i = 0; i <= 12; ++i) {
    const Vec2 p = a + (b - a) * (i / 12.0);
    const auto hit = oracle::dense_closest(path.points(), p);
    const auto proj = closest_point_on_path(path, p);
    EXPECT_NEAR(proj.along, hit.along, 1e-3);
    EXPECT_NEAR(std::abs(proj.cross), std::abs(hit.cross), 1e-3);
  }
}

TEST(Frenet, CornerTiePrefersLowerSegment)
{
  // The nearest point of both segment 0 and segment 1 is their shared vertex.
  const ReferencePath path(Polyline{{0, 0}, {1, 0}, {1, 1}, {1, 2}});
  const auto p = closest_point_on_path(path, {2, -1});
  EXPECT_EQ(p.segment_index, 0u);
  EXPECT_EQ(p.closest_point, (Vec2{1, 0}));
}

TEST(Frenet, PastEndUsesFinalSegment)
{
  const auto path = straight(80);
  const auto p = closest_point_on_path(path, {85, 1});
  EXPECT_EQ(p.segment_index, path.size() - 2);
  EXPECT_DOUBLE_EQ(p.along, 85.0);
  EXPECT_DOUBLE_EQ(p.cross, 1.0);
  const auto behind = closest_point_on_path(path, {-3, 0.5});
  EXPECT_EQ(behind.along, 0.0);
}

TEST(Frenet, UnprojectInvertsAxisAligned)
{
  const auto path = straight(10);
  const Vec2 q = unproject_point(path, 3.5, 2.0);
  EXPECT_DOUBLE_EQ(q.x, 3.5);
  EXPECT_DOUBLE_EQ(q.y, 2.0);
}

TEST(Frenet, UnprojectExtrapolatesPastEnd)
{
  const auto path = straight(80);
  const Vec2 q = unproject_point(path, 82.0, 0.0);
  EXPECT_DOUBLE_EQ(q.x, 82.0);
  EXPECT_DOUBLE_EQ(q.y, 0.0);
}

TEST(Frenet, UnprojectRejectsNegativeAlong)
{
  const auto path = straight(10);
  EXPECT_THROW(unproject_point(path, -0.1, 0.0), std::exception);
}

TEST(Frenet, RoundTripNearSmoothPath)
{
  const auto path = quarter_circle(30, 1.0);
  Rng rng(11);
  Polyline pts;
  for (int i = 0; i < 12; ++i) {
    const double s = 2.0 + 3.5 * i + rng.uniform(0.1, 0.9);
    pts.push_back(unproject_point(path, s, rng.uniform(-1.4, 1.4)));
  }
  const auto traj = timed(pts);
  const auto back = unproject(path, project(path, traj));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_NEAR(back[i].position.x, traj[i].position.x, 1e-9);
    EXPECT_NEAR(back[i].position.y, traj[i].position.y, 1e-9);
    EXPECT_EQ(back[i].t, traj[i].t);
  }
}

TEST(Frenet, MirroredTrajectoryFlipsCrossExactly)
{
  const auto path = straight(40);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{rng.uniform(0, 40), rng.uniform(0.01, 3)};
    const auto up = closest_point_on_path(path, p);
    const auto down = closest_point_on_path(path, {p.x, -p.y});
    EXPECT_EQ(up.cross, -down.cross);
    EXPECT_EQ(up.along, down.along);
  }
}

TEST(Frenet, ResampleCounts)
{
  EXPECT_EQ(straight(10).size(), 11u);
  const Polyline unit{{0, 0}, {1, 0}};
  const auto r = resample_polyline(unit, 0.4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_DOUBLE_EQ(r.points()[1].x, 0.4);
  EXPECT_DOUBLE_EQ(r.points()[2].x, 0.8);
  EXPECT_DOUBLE_EQ(r.points()[3].x, 1.0);
}

TEST(Frenet, ResampledQuarterCircleLength)
{
  const auto r = quarter_circle(10, 0.1);
  EXPECT_NEAR(r.length(), 5 * std::numbers::pi, 5 * std::numbers::pi * 1e-3);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    EXPECT_NEAR(distance(r.points()[i - 1], r.points()[i]), 0.1, 1e-6);
  }
}

TEST(Frenet, ResampleRejectsDegenerateInput)
{
  const Polyline same{{1, 1}, {1, 1}};
  EXPECT_THROW(resample_polyline(same, 1.0), std::exception);
  const Polyline ok{{0, 0}, {1, 0}};
  EXPECT_THROW(resample_polyline(ok, 0.0), std::exception);
}

TEST(Frenet, RandomPairsMatchDenseOracle)
{
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Polyline pts = oracle::random_polyline(rng, 6, rng.uniform(1.0, 4.0), 0.6);
    const ReferencePath path(pts);
    const Vec2 p = pts[rng.index(pts.size())] + Vec2{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto hit = oracle::dense_closest(pts, p, 1e-3);
    const auto proj = closest_point_on_path(path, p);
    EXPECT_NEAR(distance(proj.closest_point, p), hit.distance, 1e-3);
    EXPECT_NEAR(proj.along, hit.along, 1e-3);
    EXPECT_NEAR(std::abs(proj.cross), std::abs(hit.cross), 1e-3);
  }
}

}  // namespace
}  // namespace goalpath
