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

#include "goalpath/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace goalpath
{

namespace
{

// Half-width of the rendered window around the target.
constexpr double kView = 90.0;

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid "-0.00".
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

// SVG y grows downward; flip so the map reads like a plot.
std::string points_attr(std::span<const Vec2> pts)
{
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i].x) + "," + num(-pts[i].y);
  }
  return out;
}

std::string polyline(std::span<const Vec2> pts, const std::string & cls, const std::string & style)
{
  return "  <polyline class=\"" + cls + "\" points=\"" + points_attr(pts) + "\" " + style + "/>\n";
}

}  // namespace

std::string render_svg(const LaneMap & map, const ActorState & target, const WorldPrediction & prediction)
{
  const Vec2 c = target.centroid;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(c.x - kView) + " " + num(-c.y - kView) +
         " " + num(2 * kView) + " " + num(2 * kView) + "\" width=\"800\" height=\"800\">\n";
  svg += "  <rect x=\"" + num(c.x - kView) + "\" y=\"" + num(-c.y - kView) + "\" width=\"" + num(2 * kView) +
         "\" height=\"" + num(2 * kView) + "\" fill=\"#ffffff\"/>\n";

  for (const auto & [id, lane] : map.lanes()) {
    svg += polyline(lane.centerline, "lane", "fill=\"none\" stroke=\"#b0b0b0\" stroke-width=\"0.6\"");
    for (const TrafficControl & control : lane.controls) {
      svg += "  <polygon class=\"control " + std::string(to_string(control.kind)) + "\" points=\"" +
             points_attr(control.region) + "\" fill=\"#f0c040\" fill-opacity=\"0.4\"/>\n";
    }
  }
  for (const GoalPath & goal : prediction.goals) {
    svg += polyline(
      goal.path.points(), "goal-path", "fill=\"none\" stroke=\"#4a90d9\" stroke-width=\"1.2\" stroke-opacity=\"0.5\"");
  }
  for (std::size_t k = 0; k < prediction.trajectories.size(); ++k) {
    std::vector<Vec2> pts{c};
    pts.insert(pts.end(), prediction.trajectories[k].begin(), prediction.trajectories[k].end());
    const double p = std::clamp(prediction.joint_probs[k], 0.0, 1.0);
    svg += polyline(
      pts, "mode", "fill=\"none\" stroke=\"#d9480f\" stroke-width=\"0.8\" stroke-opacity=\"" + num(p) + "\"");
  }
  svg += polyline(target.history, "history", "fill=\"none\" stroke=\"#222222\" stroke-width=\"0.8\"");
  if (target.future) {
    std::vector<Vec2> pts{c};
    pts.insert(pts.end(), target.future->begin(), target.future->end());
    svg += polyline(
      pts, "ground-truth", "fill=\"none\" stroke=\"#2b8a3e\" stroke-width=\"0.8\" stroke-dasharray=\"1.5,1\"");
  }
  svg += "  <circle class=\"target\" cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"1.00\" fill=\"#222222\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace goalpath
