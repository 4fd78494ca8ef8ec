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

#ifndef GOALPATH__LANE_MAP_HPP_
#define GOALPATH__LANE_MAP_HPP_

#include "goalpath/frenet.hpp"
#include "goalpath/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goalpath
{

enum class ControlKind { kStopSign, kYieldSign, kLightGreen, kLightRed, kLightOther };

inline constexpr std::size_t kNumControlKinds = 5;

std::string_view to_string(ControlKind kind);
std::optional<ControlKind> control_kind_from_string(std::string_view name);

struct TrafficControl
{
  ControlKind kind{ControlKind::kStopSign};
  Polyline region;
};

struct Lane
{
  std::string id;
  Polyline centerline;
  std::vector<std::string> successor_ids;
  std::vector<TrafficControl> controls;
};

// Maximum distance between a lane's last point and a successor's first point.
inline constexpr double kMaxSuccessorGap = 0.5;

/// Immutable, validated lane graph. Lanes are keyed (and iterated) by id, so
/// every traversal is independent of the order lanes appeared in the input.
class LaneMap
{
public:
  LaneMap() = default;

  // Validates all invariants; throws Error(kData) naming the offending lane.
  static LaneMap from_lanes(std::vector<Lane> lanes);

  const std::map<std::string, Lane> & lanes() const { return lanes_; }
  const Lane * find(const std::string & id) const;
  std::size_t edge_count() const;

private:
  std::map<std::string, Lane> lanes_;
};

// Parses the map file format:
//   {"lanes":[{"id":str,"centerline":[[x,y],...],"successors":[str,...],
//              "controls":[{"kind":str,"region":[[x,y],...]},...]}]}
LaneMap load_map(std::string_view content);
LaneMap map_from_json(const nlohmann::json & j);
nlohmann::json map_to_json(const LaneMap & map);

struct RootLane
{
  std::string lane_id;
  // Arclength of the closest centerline point, measured from the lane start.
  double arclength{0.0};
  double distance{0.0};
};

struct GoalProposalConfig
{
  double search_radius{2.0};
  double path_length{80.0};
  double spacing{1.0};
  std::size_t max_paths{32};
};

// Lanes within `radius` of the centroid, sorted by (distance, lane id).
std::vector<RootLane> find_root_lanes(const LaneMap & map, const Vec2 & centroid, double radius = 2.0);

struct GoalPath
{
  ReferencePath path;
  std::vector<std::string> source_lane_ids;

  // Lane ids joined with '>'.
  std::string id() const;
};

// Every root-to-leaf lane sequence starting at `root`. A sequence ends once it
// covers `path_length` from the root's closest point, at a lane with no
// successors, or where every successor would revisit a lane already on it.
std::vector<std::vector<std::string>> enumerate_lane_sequences(
  const LaneMap & map, const RootLane & root, double path_length);

// Concatenates the sequence's centerlines starting at `start_arclength` on the
// first lane and truncates at `path_length`. Returns nullopt for a degenerate
// (zero-length) result.
std::optional<Polyline> sequence_polyline(
  const LaneMap & map, const std::vector<std::string> & sequence, double start_arclength,
  double path_length);

std::vector<GoalPath> propose_goal_paths(
  const LaneMap & map, const Vec2 & centroid, const GoalProposalConfig & config = {});

}  // namespace goalpath

#endif  // GOALPATH__LANE_MAP_HPP_
