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

#include "goalpath/error.hpp"
#include "goalpath/frenet.hpp"
#include "goalpath/labeling.hpp"
#include "goalpath/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

namespace goalpath
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kArmLength = 150.0;
constexpr double kLaneOffset = 1.75;
constexpr double kStraightSpacing = 5.0;
constexpr double kCurveSpacing = 1.0;
constexpr double kMinSpawn = 35.0;
constexpr double kOffMapClearance = 5.5;
constexpr int kOffMapAttempts = 40;

struct Rigid
{
  double rotation{0.0};
  Vec2 shift;

  Vec2 apply(const Vec2 & p) const { return rotate(p, rotation) + shift; }
};

Polyline line(const Vec2 & a, const Vec2 & b, double spacing)
{
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(distance(a, b) / spacing)));
  Polyline out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n);
    out.push_back(i == n ? b : a + (b - a) * u);
  }
  return out;
}

// Counterclockwise arc from angle a0 to a1 (a1 > a0).
Polyline arc(const Vec2 & center, double radius, double a0, double a1)
{
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(radius * (a1 - a0) / kCurveSpacing)));
  Polyline out;
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(n);
    out.push_back(center + unit_from_heading(a) * radius);
  }
  return out;
}

Polyline bezier(const Vec2 & p0, const Vec2 & p1, const Vec2 & p2, const Vec2 & p3)
{
  constexpr std::size_t kDense = 400;
  Polyline dense;
  dense.reserve(kDense + 1);
  for (std::size_t i = 0; i <= kDense; ++i) {
    const double u = static_cast<double>(i) / kDense;
    const double v = 1.0 - u;
    dense.push_back(p0 * (v * v * v) + p1 * (3 * v * v * u) + p2 * (3 * v * u * u) + p3 * (u * u * u));
  }
  Polyline out = resample_polyline(dense, kCurveSpacing).points();
  out.back() = p3;
  return out;
}

TrafficControl stop_region(const Polyline & centerline, ControlKind kind)
{
  const Vec2 end = centerline.back();
  const Vec2 dir = (end - centerline[centerline.size() - 2]) * (1.0 / distance(end, centerline[centerline.size() - 2]));
  const Vec2 left = dir.left_normal() * 1.75;
  const Vec2 back = end - dir * 3.0;
  return {kind, {back - left, end - left, end + left, back + left}};
}

std::string arm_id(int k, const char * suffix) { return "arm" + std::to_string(k) + suffix; }

std::vector<Lane> straight_lanes() { return {{"lane_0", line({0, 0}, {400, 0}, kStraightSpacing), {}, {}}}; }

std::vector<Lane> curved_lanes(double radius, double side)
{
  const double sweep = kPi / 2.0;
  const auto n = static_cast<std::size_t>(std::ceil(radius * sweep / kCurveSpacing));
  Polyline curve;
  for (std::size_t i = 0; i <= n; ++i) {
    const double phi = sweep * static_cast<double>(i) / static_cast<double>(n);
    curve.push_back({radius * std::sin(phi), side * radius * (1.0 - std::cos(phi))});
  }
  const Vec2 end = curve.back();
  return {
    {"approach", line({-60, 0}, {0, 0}, kStraightSpacing), {"curve"}, {}},
    {"curve", curve, {"exit"}, {}},
    {"exit", line(end, end + Vec2{0, side * 150.0}, kStraightSpacing), {}, {}},
  };
}

std::vector<Lane> n_way_lanes(int arms, Rng & rng)
{
  const double junction = 10.0 + 2.0 * arms;
  std::vector<Vec2> outward(arms);
  for (int k = 0; k < arms; ++k) outward[k] = unit_from_heading(2.0 * kPi * k / arms);

  std::vector<Lane> lanes;
  std::vector<Vec2> in_end(arms), out_start(arms);
  for (int k = 0; k < arms; ++k) {
    const Vec2 u = outward[k];
    const Vec2 in_right = (-u).left_normal() * -kLaneOffset;
    const Vec2 out_right = u.left_normal() * -kLaneOffset;
    in_end[k] = u * junction + in_right;
    out_start[k] = u * junction + out_right;

    Lane in{arm_id(k, "_in"), line(u * kArmLength + in_right, in_end[k], kStraightSpacing), {}, {}};
    const auto kind = static_cast<ControlKind>(rng.index(kNumControlKinds));
    in.controls.push_back(stop_region(in.centerline, kind));
    lanes.push_back(std::move(in));
    lanes.push_back({arm_id(k, "_out"), line(out_start[k], u * kArmLength + out_right, kStraightSpacing), {}, {}});
  }
  for (int i = 0; i < arms; ++i) {
    for (int j = 0; j < arms; ++j) {
      if (i == j) continue;
      const std::string id = "conn" + std::to_string(i) + "_" + std::to_string(j);
      const double reach = 0.45 * distance(in_end[i], out_start[j]);
      lanes[2 * i].successor_ids.push_back(id);
      lanes.push_back(
        {id,
         bezier(in_end[i], in_end[i] - outward[i] * reach, out_start[j] - outward[j] * reach, out_start[j]),
         {arm_id(j, "_out")},
         {}});
    }
  }
  return lanes;
}

std::vector<Lane> roundabout_lanes(int arms)
{
  constexpr double kRing = 20.0;
  constexpr double kGate = 0.25;
  std::vector<Lane> lanes;
  for (int k = 0; k < arms; ++k) {
    const double phi = 2.0 * kPi * k / arms;
    const double next = 2.0 * kPi * (k + 1) / arms;
    const Vec2 u = unit_from_heading(phi);
    const Vec2 entry = unit_from_heading(phi - kGate) * kRing;
    const Vec2 exit = unit_from_heading(phi + kGate) * kRing;
    const std::string ks = std::to_string(k);
    const std::string kn = std::to_string((k + 1) % arms);
    lanes.push_back({arm_id(k, "_in"), line(entry + u * 130.0, entry, kStraightSpacing), {"ring" + ks + "a"}, {}});
    lanes.push_back({arm_id(k, "_out"), line(exit, exit + u * 130.0, kStraightSpacing), {}, {}});
    lanes.push_back({"ring" + ks + "a", arc({0, 0}, kRing, phi - kGate, phi + kGate), {"ring" + ks + "b", arm_id(k, "_out")}, {}});
    lanes.push_back({"ring" + ks + "b", arc({0, 0}, kRing, phi + kGate, next - kGate), {"ring" + kn + "a"}, {}});
  }
  return lanes;
}

// Unit direction of the route at arclength s.
Vec2 direction_at(const ReferencePath & route, double s)
{
  const auto & st = route.stations();
  auto it = std::upper_bound(st.begin(), st.end(), s);
  std::size_t i = it == st.begin() ? 0 : static_cast<std::size_t>(it - st.begin()) - 1;
  i = std::min(i, route.size() - 2);
  return route.segment_direction(i);
}

// Arclength covered after t seconds with speed max(v0 + a t, floor).
double travelled(double v0, double a, double floor, double t)
{
  if (a == 0.0) return std::max(v0, floor) * t;
  const double knee = (floor - v0) / a;
  const bool clipped = a < 0.0 ? t > knee : t < knee;
  if (!clipped) return v0 * t + 0.5 * a * t * t;
  return v0 * knee + 0.5 * a * knee * knee + floor * (t - knee);
}

double smoothstep(double x)
{
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

struct Motion
{
  double s0{0.0};
  double v0{0.0};
  double a0{0.0};
  double floor{0.5};
  // Cross-track offset as a function of time.
  std::function<double(double)> cross;
};

std::vector<std::string> terminal_or_entry(const LaneMap & map, bool entry)
{
  std::set<std::string> has_pred;
  for (const auto & [id, lane] : map.lanes()) {
    for (const auto & s : lane.successor_ids) has_pred.insert(s);
  }
  std::vector<std::string> out;
  for (const auto & [id, lane] : map.lanes()) {
    if (entry ? !has_pred.count(id) : lane.successor_ids.empty()) out.push_back(id);
  }
  return out;
}

ActorState synthesize(
  const std::string & id, const ReferencePath & route, const Motion & m, double noise, Rng & rng)
{
  auto position = [&](double t) {
    return unproject_point(route, m.s0 + travelled(m.v0, m.a0, m.floor, t), m.cross(t));
  };
  auto noisy = [&](double t) {
    const Vec2 p = position(t);
    return noise > 0.0 ? Vec2{p.x + rng.normal(0.0, noise), p.y + rng.normal(0.0, noise)} : p;
  };

  ActorState actor;
  actor.id = id;
  for (std::size_t i = 0; i < kHistoryLength; ++i) {
    actor.history.push_back(noisy(-kHistoryStep * static_cast<double>(kHistoryLength - 1 - i)));
  }
  std::vector<Vec2> future;
  for (std::size_t i = 1; i <= kFutureLength; ++i) future.push_back(noisy(kFutureStep * static_cast<double>(i)));
  actor.future = std::move(future);
  actor.centroid = actor.history.back();

  constexpr double h = 0.25;
  const Vec2 before = position(-h);
  const Vec2 now = position(0.0);
  const Vec2 after = position(h);
  actor.velocity = (after - before) * (0.5 / h);
  actor.acceleration = (after - now * 2.0 + before) * (1.0 / (h * h));
  const Vec2 heading_dir = actor.velocity.norm() > 1e-6 ? actor.velocity : direction_at(route, m.s0);
  actor.heading = std::atan2(heading_dir.y, heading_dir.x);
  return actor;
}

double min_goal_deviation(const LaneMap & map, const ActorState & actor)
{
  double best = std::numeric_limits<double>::infinity();
  const CartesianTrajectory future = actor.future_trajectory();
  for (const GoalPath & g : propose_goal_paths(map, actor.centroid)) {
    best = std::min(best, max_cross_track_deviation(g.path, future));
  }
  return best;
}

nlohmann::json vec_json(const Vec2 & v) { return nlohmann::json::array({v.x, v.y}); }

Vec2 vec_from_json(const nlohmann::json & j)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw data_error("expected [x, y], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json points_json(const std::vector<Vec2> & pts)
{
  nlohmann::json out = nlohmann::json::array();
  for (const Vec2 & p : pts) out.push_back(vec_json(p));
  return out;
}

std::vector<Vec2> points_from_json(const nlohmann::json & j)
{
  if (!j.is_array()) throw data_error("expected a point list");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const auto & p : j) out.push_back(vec_from_json(p));
  return out;
}

}  // namespace

std::string to_string(const MapKind & kind)
{
  switch (kind.type) {
    case MapKind::Type::kStraight:
      return "straight";
    case MapKind::Type::kCurved:
      return "curved";
    case MapKind::Type::kNWay:
      return "n_way" + std::to_string(kind.arms);
    case MapKind::Type::kRoundabout:
      return "roundabout";
  }
  return "unknown";
}

std::optional<MapKind> map_kind_from_string(std::string_view name)
{
  if (name == "straight") return MapKind::straight();
  if (name == "curved") return MapKind::curved();
  if (name == "roundabout") return MapKind::roundabout();
  if (name.size() == 6 && name.substr(0, 5) == "n_way" && name[5] >= '3' && name[5] <= '6') {
    return MapKind::n_way(name[5] - '0');
  }
  return std::nullopt;
}

LaneMap gen_map(const MapKind & kind, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<Lane> lanes;
  switch (kind.type) {
    case MapKind::Type::kStraight:
      lanes = straight_lanes();
      break;
    case MapKind::Type::kCurved: {
      const double radius = kind.radius ? *kind.radius : rng.uniform(25.0, 80.0);
      if (!(radius > 0.0)) throw usage_error("curve radius must be positive");
      lanes = curved_lanes(radius, rng.bernoulli(0.5) ? 1.0 : -1.0);
      break;
    }
    case MapKind::Type::kNWay:
      if (kind.arms < 3 || kind.arms > 6) throw usage_error("n_way arm count must be in 3..6");
      lanes = n_way_lanes(kind.arms, rng);
      break;
    case MapKind::Type::kRoundabout:
      lanes = roundabout_lanes(kind.arms);
      break;
  }
  const Rigid placement{rng.uniform(-kPi, kPi), {rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)}};
  for (Lane & lane : lanes) {
    for (Vec2 & p : lane.centerline) p = placement.apply(p);
    for (TrafficControl & c : lane.controls) {
      for (Vec2 & p : c.region) p = placement.apply(p);
    }
  }
  return LaneMap::from_lanes(std::move(lanes));
}

std::string_view to_string(Behavior behavior)
{
  switch (behavior) {
    case Behavior::kLaneFollow:
      return "lane_follow";
    case Behavior::kOffMap:
      return "off_map";
    case Behavior::kPullOver:
      return "pull_over";
  }
  return "unknown";
}

std::optional<Behavior> behavior_from_string(std::string_view name)
{
  if (name == "lane_follow") return Behavior::kLaneFollow;
  if (name == "off_map") return Behavior::kOffMap;
  if (name == "pull_over") return Behavior::kPullOver;
  return std::nullopt;
}

ActorState gen_actor(const LaneMap & map, const ActorSpec & spec, std::uint64_t seed)
{
  Rng rng(seed);

  // Route: 85% start on an entry lane, otherwise on a terminal lane.
  std::string start;
  if (spec.start_lane) {
    if (!map.find(*spec.start_lane)) throw usage_error("unknown start lane " + *spec.start_lane);
    start = *spec.start_lane;
  } else {
    const bool entry = rng.bernoulli(0.85);
    const auto candidates = terminal_or_entry(map, entry);
    const auto & pool = candidates.empty() ? terminal_or_entry(map, !entry) : candidates;
    start = pool[rng.index(pool.size())];
  }
  const auto sequences = enumerate_lane_sequences(map, RootLane{start, 0.0, 0.0}, 300.0);
  std::size_t branch = spec.branch ? *spec.branch : rng.index(sequences.size());
  if (branch >= sequences.size()) {
    throw usage_error("branch " + std::to_string(branch) + " out of range for lane " + start);
  }
  const auto polyline = sequence_polyline(map, sequences[branch], 0.0, 1e9);
  if (!polyline) throw data_error("degenerate route from lane " + start);
  const ReferencePath route(*polyline);

  const double first = polyline_length(map.find(start)->centerline);
  double s0 = 0.0;
  if (spec.spawn_arclength) {
    s0 = *spec.spawn_arclength;
  } else {
    double lo = std::max(kMinSpawn, first - 70.0);
    const double hi = std::max(kMinSpawn + 1.0, std::min(first + 30.0, route.length() - 100.0));
    if (lo >= hi) lo = kMinSpawn;
    s0 = rng.uniform(lo, hi);
  }

  // Turn ahead of the spawn point; left is positive.
  const Vec2 d0 = direction_at(route, s0);
  const Vec2 d1 = direction_at(route, std::min(s0 + 80.0, route.length()));
  const double turn = std::atan2(d0.cross(d1), d0.dot(d1));
  const double turn_deg = std::abs(turn) * 180.0 / kPi;
  const double sign = turn > 0.0 ? 1.0 : -1.0;

  Motion m;
  m.s0 = s0;
  double bias = 0.0;
  if (turn_deg < 20.0) {
    m.v0 = rng.uniform(8.0, 14.0);
    m.a0 = rng.uniform(-0.2, 0.8);
  } else if (turn_deg < 100.0) {
    m.v0 = rng.uniform(6.0, 10.0);
    m.a0 = -rng.uniform(0.3, 0.9);
    bias = 0.35 * sign;
  } else {
    m.v0 = rng.uniform(5.0, 8.0);
    m.a0 = -rng.uniform(1.2, 2.0);
    bias = 0.65 * sign;
  }
  if (spec.lateral_bias) bias = *spec.lateral_bias;

  ActorState actor;
  switch (spec.behavior) {
    case Behavior::kLaneFollow:
      if (spec.speed) m.v0 = *spec.speed;
      if (spec.accel) m.a0 = *spec.accel;
      m.cross = [bias](double) { return bias; };
      actor = synthesize(spec.id, route, m, spec.noise_sigma, rng);
      break;
    case Behavior::kPullOver:
      m.v0 = spec.speed ? *spec.speed : rng.uniform(6.0, 12.0);
      m.a0 = spec.accel ? *spec.accel : -m.v0 / 5.0;
      m.floor = 0.0;
      m.cross = [](double t) { return -2.5 * smoothstep(t / 4.0); };
      actor = synthesize(spec.id, route, m, spec.noise_sigma, rng);
      break;
    case Behavior::kOffMap: {
      for (int attempt = 0; attempt < kOffMapAttempts; ++attempt) {
        m.v0 = spec.speed ? *spec.speed : rng.uniform(6.0, 12.0);
        m.a0 = spec.accel ? *spec.accel : rng.uniform(-0.5, 0.5);
        const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
        const double offset = rng.uniform(0.0, 3.0);
        // Later attempts drift harder.
        const double rate = rng.uniform(0.25, 0.45) * (1.0 + attempt / 10.0);
        m.cross = [=](double t) {
          const double u = std::max(0.0, t + 1.0);
          return side * (offset + rate * u * u);
        };
        actor = synthesize(spec.id, route, m, spec.noise_sigma, rng);
        if (min_goal_deviation(map, actor) >= kOffMapClearance) break;
      }
      break;
    }
  }
  actor.validate();
  return actor;
}

ActorState gen_parked_actor(const LaneMap & map, const std::string & id, std::uint64_t seed)
{
  Rng rng(seed);
  auto it = map.lanes().begin();
  std::advance(it, static_cast<long>(rng.index(map.lanes().size())));
  const ReferencePath lane(it->second.centerline);
  Motion m;
  m.s0 = rng.uniform(0.0, lane.length());
  m.floor = 0.0;
  m.cross = [](double) { return -2.6; };
  ActorState actor = synthesize(id, lane, m, 0.1, rng);
  actor.is_parked = true;
  return actor;
}

const ActorState & Scene::target() const
{
  const ActorState * found = nullptr;
  for (const ActorState & a : actors) {
    if (!a.is_target) continue;
    if (found) throw data_error("scene " + std::to_string(seed) + ": more than one target actor");
    found = &a;
  }
  if (!found) throw data_error("scene " + std::to_string(seed) + ": no target actor");
  return *found;
}

bool is_scene_kind(std::string_view kind) { return kind == "mixed" || map_kind_from_string(kind).has_value(); }

Scene gen_scene(std::string_view kind, std::uint64_t seed)
{
  Rng pick(derive_seed(seed, 0));
  MapKind map_kind;
  if (kind == "mixed") {
    const double u = pick.uniform();
    map_kind = u < 0.20   ? MapKind::straight()
               : u < 0.40 ? MapKind::curved()
               : u < 0.60 ? MapKind::n_way(3)
               : u < 0.85 ? MapKind::n_way(4)
                          : MapKind::n_way(5);
  } else if (auto parsed = map_kind_from_string(kind)) {
    map_kind = *parsed;
  } else {
    throw usage_error("unknown scene kind '" + std::string(kind) + "'");
  }
  const double b = pick.uniform();
  const Behavior behavior = b < 0.8 ? Behavior::kLaneFollow : b < 0.9 ? Behavior::kOffMap : Behavior::kPullOver;

  Scene scene;
  scene.seed = seed;
  scene.kind = to_string(map_kind);
  scene.behavior = std::string(to_string(behavior));
  scene.map = gen_map(map_kind, derive_seed(seed, 1));

  ActorSpec spec;
  spec.behavior = behavior;
  ActorState target = gen_actor(scene.map, spec, derive_seed(seed, 2));
  target.is_target = true;
  scene.actors.push_back(std::move(target));

  const std::size_t neighbors = pick.index(6);
  for (std::size_t i = 0; i < neighbors; ++i) {
    const std::string id = "a" + std::to_string(i + 1);
    const std::uint64_t s = derive_seed(seed, 10 + i);
    if (pick.bernoulli(0.2)) {
      scene.actors.push_back(gen_parked_actor(scene.map, id, s));
    } else {
      ActorSpec n;
      n.id = id;
      scene.actors.push_back(gen_actor(scene.map, n, s));
    }
  }
  return scene;
}

nlohmann::json actor_to_json(const ActorState & a)
{
  nlohmann::json j;
  j["id"] = a.id;
  j["centroid"] = vec_json(a.centroid);
  j["heading"] = a.heading;
  j["velocity"] = vec_json(a.velocity);
  j["acceleration"] = vec_json(a.acceleration);
  j["history"] = points_json(a.history);
  j["future"] = a.future ? points_json(*a.future) : nlohmann::json(nullptr);
  j["is_target"] = a.is_target;
  j["is_parked"] = a.is_parked;
  return j;
}

ActorState actor_from_json(const nlohmann::json & j)
{
  ActorState a;
  try {
    a.id = j.at("id").get<std::string>();
    a.centroid = vec_from_json(j.at("centroid"));
    a.heading = j.at("heading").get<double>();
    a.velocity = vec_from_json(j.at("velocity"));
    a.acceleration = vec_from_json(j.at("acceleration"));
    a.history = points_from_json(j.at("history"));
    if (j.contains("future") && !j.at("future").is_null()) a.future = points_from_json(j.at("future"));
    a.is_target = j.value("is_target", false);
    a.is_parked = j.value("is_parked", false);
  } catch (const nlohmann::json::exception & e) {
    throw data_error(std::string("actor: ") + e.what());
  }
  a.validate();
  return a;
}

nlohmann::json scene_to_json(const Scene & scene)
{
  nlohmann::json j;
  j["version"] = kDatasetVersion;
  j["seed"] = scene.seed;
  j["kind"] = scene.kind;
  j["behavior"] = scene.behavior;
  j["map"] = map_to_json(scene.map);
  nlohmann::json actors = nlohmann::json::array();
  for (const ActorState & a : scene.actors) actors.push_back(actor_to_json(a));
  j["actors"] = std::move(actors);
  return j;
}

Scene scene_from_json(const nlohmann::json & j)
{
  if (!j.is_object()) throw data_error("scene must be a JSON object");
  if (!j.contains("version")) throw data_error("missing version field");
  const auto & v = j.at("version");
  if (!v.is_number_integer() || v.get<int>() != kDatasetVersion) {
    throw data_error(
      "unsupported dataset version " + v.dump() + " (reader supports " + std::to_string(kDatasetVersion) + ")");
  }
  Scene scene;
  try {
    scene.seed = j.at("seed").get<std::uint64_t>();
    scene.kind = j.value("kind", "");
    scene.behavior = j.value("behavior", "");
    scene.map = map_from_json(j.at("map"));
    for (const auto & a : j.at("actors")) scene.actors.push_back(actor_from_json(a));
  } catch (const nlohmann::json::exception & e) {
    throw data_error(std::string("scene: ") + e.what());
  }
  scene.target();
  return scene;
}

void write_dataset(std::ostream & out, const std::vector<Scene> & scenes)
{
  for (const Scene & s : scenes) out << scene_to_json(s).dump() << '\n';
}

void write_dataset(const std::string & path, const std::vector<Scene> & scenes)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  write_dataset(out, scenes);
  out.flush();
  if (!out) throw data_error("failed writing '" + path + "'");
}

std::vector<Scene> read_dataset(std::istream & in)
{
  std::vector<Scene> scenes;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      scenes.push_back(scene_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::exception & e) {
      throw data_error("dataset line " + std::to_string(line) + ": " + e.what());
    } catch (const Error & e) {
      throw Error(e.kind(), "dataset line " + std::to_string(line) + ": " + e.what());
    }
  }
  return scenes;
}

std::vector<Scene> read_dataset(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

std::string_view to_string(Split split)
{
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

std::optional<Split> split_from_string(std::string_view name)
{
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

Split split_of(std::uint64_t scene_seed)
{
  const std::uint64_t bucket = derive_seed(scene_seed, 0x73706c6974ULL) % 10;
  return bucket < 8 ? Split::kTrain : bucket == 8 ? Split::kVal : Split::kTest;
}

}  // namespace goalpath
