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

#ifndef GOALPATH__DATAIO_HPP_
#define GOALPATH__DATAIO_HPP_

#include "goalpath/features.hpp"
#include "goalpath/lane_map.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goalpath
{

inline constexpr int kDatasetVersion = 1;

struct MapKind
{
  enum class Type { kStraight, kCurved, kNWay, kRoundabout };

  Type type{Type::kStraight};
  // Curve radius for kCurved; drawn from [25, 80] when unset.
  std::optional<double> radius;
  // Arm count for kNWay, 3..6.
  int arms{4};

  static MapKind straight() { return {Type::kStraight, std::nullopt, 0}; }
  static MapKind curved(std::optional<double> r = std::nullopt) { return {Type::kCurved, r, 0}; }
  static MapKind n_way(int n) { return {Type::kNWay, std::nullopt, n}; }
  static MapKind roundabout() { return {Type::kRoundabout, std::nullopt, 4}; }
};

// "straight", "curved", "n_way3".."n_way6", "roundabout".
std::string to_string(const MapKind & kind);
std::optional<MapKind> map_kind_from_string(std::string_view name);

// Lane ids by kind:
//   straight:   lane_0
//   curved:     approach -> curve -> exit
//   n_way:      arm{k}_in -> conn{k}_{j} -> arm{j}_out for every j != k
//   roundabout: arm{k}_in -> ring{k}a -> {ring{k}b, arm{k}_out}, ring{k}b -> ring{k+1}a
// Every map is placed under a random rigid transform.
LaneMap gen_map(const MapKind & kind, std::uint64_t seed);

enum class Behavior { kLaneFollow, kOffMap, kPullOver };

std::string_view to_string(Behavior behavior);
std::optional<Behavior> behavior_from_string(std::string_view name);

struct ActorSpec
{
  Behavior behavior{Behavior::kLaneFollow};
  // Speed and longitudinal acceleration at t = 0; drawn when unset.
  std::optional<double> speed;
  std::optional<double> accel;
  double noise_sigma{0.1};
  // Index into the lane sequences leaving the start lane; drawn when unset.
  std::optional<std::size_t> branch;
  std::optional<std::string> start_lane;
  std::optional<double> spawn_arclength;
  // Lateral in-lane offset; by default derived from the upcoming turn.
  std::optional<double> lateral_bias;
  std::string id{"a0"};
};

// Synthesizes a 2 s history at 10 Hz and a 6 s future at 2 Hz along a lane
// sequence. Off-map actors are redrawn until no proposed goal path stays
// within 5.5 m of their future.
ActorState gen_actor(const LaneMap & map, const ActorSpec & spec, std::uint64_t seed);

// Stationary actor 2.6 m to the right of a random lane.
ActorState gen_parked_actor(const LaneMap & map, const std::string & id, std::uint64_t seed);

struct Scene
{
  std::uint64_t seed{0};
  std::string kind;
  std::string behavior;
  LaneMap map;
  std::vector<ActorState> actors;

  // Throws Error(kData) unless exactly one actor is flagged as the target.
  const ActorState & target() const;
};

// "mixed" draws the map kind and behavior from the seed:
//   straight 0.20, curved 0.20, n_way3 0.20, n_way4 0.25, n_way5 0.15
//   lane_follow 0.80, off_map 0.10, pull_over 0.10
// Other kinds use the same behavior mix. Scenes carry 0 to 5 neighbors.
Scene gen_scene(std::string_view kind, std::uint64_t seed);

bool is_scene_kind(std::string_view kind);

nlohmann::json actor_to_json(const ActorState & actor);
ActorState actor_from_json(const nlohmann::json & j);
nlohmann::json scene_to_json(const Scene & scene);
Scene scene_from_json(const nlohmann::json & j);

// JSON Lines, one scene per line.
void write_dataset(std::ostream & out, const std::vector<Scene> & scenes);
void write_dataset(const std::string & path, const std::vector<Scene> & scenes);
// Errors name the 1-based line number.
std::vector<Scene> read_dataset(std::istream & in);
std::vector<Scene> read_dataset(const std::string & path);

enum class Split { kTrain, kVal, kTest };

std::string_view to_string(Split split);
std::optional<Split> split_from_string(std::string_view name);

// 80/10/10 by a hash of the scene seed.
Split split_of(std::uint64_t scene_seed);

}  // namespace goalpath

#endif  // GOALPATH__DATAIO_HPP_
