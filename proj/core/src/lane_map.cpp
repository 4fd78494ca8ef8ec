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

#include "goalpath/lane_map.hpp"

#include "goalpath/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

namespace goalpath
{

namespace
{

constexpr std::pair<ControlKind, std::string_view> kControlNames[] = {
  {ControlKind::kStopSign, "stop_sign"},
  {ControlKind::kYieldSign, "yield_sign"},
  {ControlKind::kLightGreen, "light_green"},
  {ControlKind::kLightRed, "light_red"},
  {ControlKind::kLightOther, "light_other"},
};

Polyline points_from_json(const nlohmann::json & j, const std::string & what)
{
  if (!j.is_array()) {
    throw data_error(what + ": expected an array of [x, y] points");
  }
  Polyline out;
  out.reserve(j.size());
  for (const auto & p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw data_error(what + ": malformed point");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

nlohmann::json points_to_json(const Polyline & points)
{
  auto out = nlohmann::json::array();
  for (const auto & p : points) {
    out.push_back({p.x, p.y});
  }
  return out;
}

// Arclength and distance of the closest point on a polyline.
std::pair<double, double> closest_arclength(const Polyline & line, const Vec2 & p)
{
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    double t = 0.0;
    const Vec2 q = closest_point_on_segment(line[i], line[i + 1], p, &t);
    const Vec2 diff = p - q;
    const double d2 = diff.dot(diff);
    const double seg_len = distance(line[i], line[i + 1]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = s + t * seg_len;
    }
    s += seg_len;
  }
  return {best_s, std::sqrt(best_d2)};
}

Vec2 point_at_arclength(const Polyline & line, double s)
{
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double seg_len = distance(line[i], line[i + 1]);
    if (s <= acc + seg_len) {
      const double u = std::clamp((s - acc) / seg_len, 0.0, 1.0);
      if (u == 1.0) return line[i + 1];
      return line[i] + (line[i + 1] - line[i]) * u;
    }
    acc += seg_len;
  }
  return line.back();
}

}  // namespace

std::string_view to_string(ControlKind kind)
{
  for (const auto & [k, name] : kControlNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ControlKind> control_kind_from_string(std::string_view name)
{
  for (const auto & [k, n] : kControlNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

LaneMap LaneMap::from_lanes(std::vector<Lane> lanes)
{
  LaneMap map;
  for (auto & lane : lanes) {
    if (lane.id.empty()) {
      throw data_error("lane with empty id");
    }
    if (lane.centerline.size() < 2) {
      throw data_error("lane " + lane.id + ": degenerate centerline (fewer than 2 points)");
    }
    for (std::size_t i = 1; i < lane.centerline.size(); ++i) {
      if (lane.centerline[i] == lane.centerline[i - 1]) {
        throw data_error("lane " + lane.id + ": degenerate centerline (repeated point)");
      }
    }
    for (const auto & control : lane.controls) {
      if (control.region.size() < 3 || !is_simple_polygon(control.region)) {
        throw data_error("lane " + lane.id + ": control region is not a simple polygon");
      }
    }
    const std::string id = lane.id;
    if (!map.lanes_.emplace(id, std::move(lane)).second) {
      throw data_error("lane " + id + ": duplicate id");
    }
  }
  for (const auto & [id, lane] : map.lanes_) {
    for (const auto & succ_id : lane.successor_ids) {
      const Lane * succ = map.find(succ_id);
      if (succ == nullptr) {
        throw data_error("lane " + id + ": dangling successor id " + succ_id);
      }
      if (distance(lane.centerline.back(), succ->centerline.front()) > kMaxSuccessorGap) {
        throw data_error("lane " + id + ": successor gap to " + succ_id);
      }
    }
  }
  return map;
}

const Lane * LaneMap::find(const std::string & id) const
{
  const auto it = lanes_.find(id);
  return it == lanes_.end() ? nullptr : &it->second;
}

std::size_t LaneMap::edge_count() const
{
  std::size_t n = 0;
  for (const auto & [id, lane] : lanes_) {
    n += lane.successor_ids.size();
  }
  return n;
}

LaneMap map_from_json(const nlohmann::json & j)
{
  if (!j.is_object() || !j.contains("lanes") || !j["lanes"].is_array()) {
    throw data_error("map: missing \"lanes\" array");
  }
  std::vector<Lane> lanes;
  for (const auto & lj : j["lanes"]) {
    if (!lj.is_object() || !lj.contains("id") || !lj["id"].is_string()) {
      throw data_error("map: lane without string id");
    }
    Lane lane;
    lane.id = lj["id"].get<std::string>();
    if (!lj.contains("centerline")) {
      throw data_error("lane " + lane.id + ": missing centerline");
    }
    lane.centerline = points_from_json(lj["centerline"], "lane " + lane.id + " centerline");
    if (lj.contains("successors")) {
      for (const auto & s : lj["successors"]) {
        if (!s.is_string()) {
          throw data_error("lane " + lane.id + ": successor id is not a string");
        }
        lane.successor_ids.push_back(s.get<std::string>());
      }
    }
    if (lj.contains("controls")) {
      for (const auto & cj : lj["controls"]) {
        if (!cj.is_object() || !cj.contains("kind") || !cj["kind"].is_string() || !cj.contains("region")) {
          throw data_error("lane " + lane.id + ": malformed control");
        }
        const auto kind = control_kind_from_string(cj["kind"].get<std::string>());
        if (!kind) {
          throw data_error("lane " + lane.id + ": unknown control kind " + cj["kind"].get<std::string>());
        }
        lane.controls.push_back({*kind, points_from_json(cj["region"], "lane " + lane.id + " control")});
      }
    }
    lanes.push_back(std::move(lane));
  }
  return LaneMap::from_lanes(std::move(lanes));
}

LaneMap load_map(std::string_view content)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error & e) {
    throw data_error(std::string("map: parse failure: ") + e.what());
  }
  return map_from_json(j);
}

nlohmann::json map_to_json(const LaneMap & map)
{
  auto lanes = nlohmann::json::array();
  for (const auto & [id, lane] : map.lanes()) {
    auto controls = nlohmann::json::array();
    for (const auto & c : lane.controls) {
      controls.push_back({{"kind", std::string(to_string(c.kind))}, {"region", points_to_json(c.region)}});
    }
    lanes.push_back(
      {{"id", id},
       {"centerline", points_to_json(lane.centerline)},
       {"successors", lane.successor_ids},
       {"controls", controls}});
  }
  return {{"lanes", lanes}};
}

std::vector<RootLane> find_root_lanes(const LaneMap & map, const Vec2 & centroid, double radius)
{
  std::vector<RootLane> roots;
  for (const auto & [id, lane] : map.lanes()) {
    const auto [s, d] = closest_arclength(lane.centerline, centroid);
    if (d <= radius) {
      roots.push_back({id, s, d});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const RootLane & a, const RootLane & b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.lane_id < b.lane_id;
  });
  return roots;
}

std::string GoalPath::id() const
{
  std::string out;
  for (std::size_t i = 0; i < source_lane_ids.size(); ++i) {
    if (i > 0) out += '>';
    out += source_lane_ids[i];
  }
  return out;
}

std::vector<std::vector<std::string>> enumerate_lane_sequences(
  const LaneMap & map, const RootLane & root, double path_length)
{
  std::vector<std::vector<std::string>> out;
  const Lane * root_lane = map.find(root.lane_id);
  if (root_lane == nullptr) {
    return out;
  }

  std::vector<std::string> sequence{root.lane_id};
  // Depth-first walk; `covered` is the arclength already spanned by the
  // sequence from the root's closest point.
  auto walk = [&](auto && self, const Lane & lane, double covered) -> void {
    if (covered >= path_length || lane.successor_ids.empty()) {
      out.push_back(sequence);
      return;
    }
    std::vector<std::string> successors = lane.successor_ids;
    std::sort(successors.begin(), successors.end());
    successors.erase(std::unique(successors.begin(), successors.end()), successors.end());
    bool extended = false;
    for (const auto & succ_id : successors) {
      if (std::find(sequence.begin(), sequence.end(), succ_id) != sequence.end()) {
        continue;
      }
      const Lane & succ = *map.find(succ_id);
      extended = true;
      sequence.push_back(succ_id);
      self(self, succ, covered + polyline_length(succ.centerline));
      sequence.pop_back();
    }
    if (!extended) {
      out.push_back(sequence);
    }
  };
  walk(walk, *root_lane, polyline_length(root_lane->centerline) - root.arclength);
  return out;
}

std::optional<Polyline> sequence_polyline(
  const LaneMap & map, const std::vector<std::string> & sequence, double start_arclength,
  double path_length)
{
  Polyline raw;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const Lane & lane = *map.find(sequence[k]);
    const Polyline & line = lane.centerline;
    if (k == 0) {
      raw.push_back(point_at_arclength(line, start_arclength));
      double s = 0.0;
      for (std::size_t i = 1; i < line.size(); ++i) {
        s += distance(line[i - 1], line[i]);
        if (s > start_arclength && !(line[i] == raw.back())) {
          raw.push_back(line[i]);
        }
      }
    } else {
      for (const auto & p : line) {
        if (distance(p, raw.back()) > 1e-9) {
          raw.push_back(p);
        }
      }
    }
  }

  // Truncate at path_length.
  Polyline out{raw.front()};
  double covered = 0.0;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    const double seg = distance(raw[i - 1], raw[i]);
    if (covered + seg >= path_length) {
      const double u = (path_length - covered) / seg;
      const Vec2 end = u >= 1.0 ? raw[i] : raw[i - 1] + (raw[i] - raw[i - 1]) * u;
      if (!(end == out.back())) {
        out.push_back(end);
      }
      break;
    }
    covered += seg;
    out.push_back(raw[i]);
  }
  if (out.size() < 2) {
    return std::nullopt;
  }
  return out;
}

std::vector<GoalPath> propose_goal_paths(
  const LaneMap & map, const Vec2 & centroid, const GoalProposalConfig & config)
{
  std::vector<GoalPath> paths;
  for (const auto & root : find_root_lanes(map, centroid, config.search_radius)) {
    for (auto & sequence : enumerate_lane_sequences(map, root, config.path_length)) {
      const auto line = sequence_polyline(map, sequence, root.arclength, config.path_length);
      if (!line) {
        continue;
      }
      paths.push_back({resample_polyline(*line, config.spacing), std::move(sequence)});
    }
  }
  std::stable_sort(paths.begin(), paths.end(), [](const GoalPath & a, const GoalPath & b) {
    return a.source_lane_ids < b.source_lane_ids;
  });

  std::vector<GoalPath> unique;
  for (auto & p : paths) {
    const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const GoalPath & q) {
      return q.path.points() == p.path.points();
    });
    if (!duplicate) {
      unique.push_back(std::move(p));
    }
  }
  if (unique.size() > config.max_paths) {
    unique.resize(config.max_paths);
  }
  return unique;
}

}  // namespace goalpath
