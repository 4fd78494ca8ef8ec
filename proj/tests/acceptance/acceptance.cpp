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


// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include "goalpath/dataio.hpp"
#include "goalpath/evaluation.hpp"
#include "goalpath/frenet.hpp"
#include "goalpath/labeling.hpp"
#include "goalpath/lane_map.hpp"
#include "goalpath/loss.hpp"
#include "goalpath/metrics.hpp"
#include "goalpath/model.hpp"
#include "goalpath/svg.hpp"
#include "goalpath/training.hpp"

#include "oracles.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace
{

using namespace goalpath;
namespace fs = std::filesystem;

// Tolerances and thresholds. These are the acceptance bar; do not relax.
constexpr double kOracleTol = 1e-3;
constexpr double kRoundTripTol = 1e-9;
constexpr double kFrenetSeconds = 10.0;
constexpr double kExactTol = 1e-12;
constexpr double kLaneFollowLabeledRate = 0.95;
constexpr double kEquivarianceTol = 1e-9;
constexpr double kSumTol = 1e-12;
constexpr double kGradStep = 1e-5;
constexpr double kGradRelTol = 1e-4;
constexpr double kGoalAccuracy = 0.90;
constexpr double kAdeImprovement = 0.30;
constexpr double kTrainSeconds = 30.0 * 60.0;

// End-to-end recipe.
constexpr std::size_t kTrainScenes = 2000;
constexpr std::size_t kTestScenes = 500;
constexpr std::size_t kEpochs = 45;
constexpr double kLearningRate = 1e-3;
constexpr double kFinalLearningRate = 5e-5;

struct Outcome
{
  bool pass{false};
  std::string detail;
};

std::string fmt(const char * f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Outcome frenet_correctness()
{
  Rng rng(1001);
  double worst_along = 0.0;
  double worst_cross = 0.0;
  double worst_trip = 0.0;
  std::size_t trips = 0;
  double library_seconds = 0.0;

  for (int trial = 0; trial < 1000; ++trial) {
    const Polyline pts = oracle::random_polyline(rng, 3 + rng.index(5), rng.uniform(1.0, 4.0), 0.6);
    const Vec2 first_dir = (pts[1] - pts[0]) * (1.0 / distance(pts[1], pts[0]));
    const std::size_t n = pts.size();
    const Vec2 last_dir = (pts[n - 1] - pts[n - 2]) * (1.0 / distance(pts[n - 1], pts[n - 2]));

    CartesianTrajectory traj;
    for (std::size_t i = 0; i < kFutureLength; ++i) {
      Vec2 base;
      const double where = rng.uniform();
      if (where < 0.1) {
        base = pts.front() - first_dir * rng.uniform(0.0, 2.0);
      } else if (where < 0.2) {
        base = pts.back() + last_dir * rng.uniform(0.0, 3.0);
      } else {
        const std::size_t k = rng.index(n - 1);
        base = pts[k] + (pts[k + 1] - pts[k]) * rng.uniform();
      }
      traj.push_back({0.5 * static_cast<double>(i + 1), base + Vec2{rng.uniform(-3, 3), rng.uniform(-3, 3)}});
    }

    const auto t0 = std::chrono::steady_clock::now();
    const ReferencePath path(pts);
    const PathFrameTrajectory projected = project(path, traj);
    const CartesianTrajectory back = unproject(path, projected);
    library_seconds += seconds_since(t0);

    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec2 p = traj[i].position;
      const oracle::DenseHit hit = oracle::dense_closest(pts, p, 1e-4);
      worst_along = std::max(worst_along, std::abs(projected.waypoints[i].along - hit.along));
      worst_cross = std::max(worst_cross, std::abs(std::abs(projected.waypoints[i].cross) - std::abs(hit.cross)));

      // Corner cases: the closest point is a vertex, except past the far end.
      const Vec2 a = pts[hit.segment];
      const Vec2 b = pts[hit.segment + 1];
      const bool interior = distance(hit.point, a) > 1e-3 && distance(hit.point, b) > 1e-3;
      const bool past_end = hit.segment + 2 == n && distance(hit.point, b) <= 1e-3 && (p - b).dot(last_dir) > 1e-3;
      if (interior || past_end) {
        worst_trip = std::max(worst_trip, distance(back[i].position, p));
        ++trips;
      }
    }
  }
  const bool pass = worst_along <= kOracleTol && worst_cross <= kOracleTol && worst_trip < kRoundTripTol &&
                    library_seconds < kFrenetSeconds && trips > 0;
  return {
    pass, fmt(
            "max |da| %.2e, max |d|c|| %.2e, round trip %.2e over %zu points, %.3f s", worst_along, worst_cross,
            worst_trip, trips, library_seconds)};
}

// ---------------------------------------------------------------- 2

Outcome analytic_frenet()
{
  struct Case
  {
    Polyline ends;
    // Expected (along, cross) for a point.
    std::function<std::pair<double, double>(const Vec2 &)> expect;
    std::vector<Vec2> points;
  };
  std::vector<Vec2> grid;
  for (double x : {0.5, 3.25, 17.0, 42.125, 99.5}) {
    for (double y : {-2.5, -0.75, 0.0, 1.5, 3.0}) grid.push_back({x, y});
  }
  auto map_points = [&](auto f) {
    std::vector<Vec2> out;
    for (const Vec2 & g : grid) out.push_back(f(g));
    return out;
  };
  const std::vector<Case> cases{
    {{{0, 0}, {100, 0}}, [](const Vec2 & p) { return std::pair{p.x, p.y}; }, grid},
    {{{0, 0}, {0, 100}},
     [](const Vec2 & p) { return std::pair{p.y, -p.x}; },
     map_points([](const Vec2 & g) { return Vec2{-g.y, g.x}; })},
    {{{50, 10}, {-50, 10}},
     [](const Vec2 & p) { return std::pair{50.0 - p.x, 10.0 - p.y}; },
     map_points([](const Vec2 & g) { return Vec2{50.0 - g.x, 10.0 - g.y}; })},
    {{{5, 5}, {5, -95}},
     [](const Vec2 & p) { return std::pair{5.0 - p.y, p.x - 5.0}; },
     map_points([](const Vec2 & g) { return Vec2{5.0 + g.y, 5.0 - g.x}; })},
  };

  double worst = 0.0;
  std::size_t checked = 0;
  auto check = [&](const ReferencePath & path, const Vec2 & p, double along, double cross) {
    const PathProjection proj = closest_point_on_path(path, p);
    const Vec2 back = unproject_point(path, along, cross);
    worst = std::max({worst, std::abs(proj.along - along), std::abs(proj.cross - cross), distance(back, p)});
    ++checked;
  };
  for (const Case & c : cases) {
    for (const ReferencePath & path : {ReferencePath(c.ends), resample_polyline(c.ends, 1.0)}) {
      for (const Vec2 & p : c.points) {
        const auto [along, cross] = c.expect(p);
        check(path, p, along, cross);
      }
    }
  }
  // Right-angle turn, points well inside each leg's region.
  const ReferencePath bend(Polyline{{0, 0}, {10, 0}, {10, 10}});
  check(bend, {4, 1.5}, 4.0, 1.5);
  check(bend, {6.5, -2}, 6.5, -2.0);
  check(bend, {11.5, 6}, 16.0, -1.5);
  check(bend, {8.25, 7}, 17.0, 1.75);
  return {worst <= kExactTol, fmt("max error %.2e over %zu points", worst, checked)};
}

// ---------------------------------------------------------------- 3

GoalPath parallel_goal(double y, const std::string & id)
{
  return {resample_polyline(Polyline{{0, y}, {80, y}}, 1.0), {id}};
}

CartesianTrajectory straight_future(double y)
{
  CartesianTrajectory out;
  for (std::size_t i = 1; i <= kFutureLength; ++i) out.push_back({0.5 * static_cast<double>(i), {5.0 * static_cast<double>(i), y}});
  return out;
}

bool equal_shares(const SpatialTarget & t)
{
  const auto g = static_cast<std::size_t>(std::count_if(t.goal_probs.begin(), t.goal_probs.end(), [](double p) { return p > 0; }));
  if (g == 0) return t.goal_free_prob == 1.0;
  for (double p : t.goal_probs) {
    if (p != 0.0 && p != 1.0 / static_cast<double>(g)) return false;
  }
  return t.goal_free_prob == 0.0;
}

Outcome auto_labeling()
{
  std::size_t off_map = 0, off_map_free = 0, follow = 0, follow_labeled = 0, shared = 0, shared_ok = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Scene scene = gen_scene("mixed", seed);
    const ActorState & t = scene.target();
    const auto goals = propose_goal_paths(scene.map, t.centroid);
    const SpatialTarget label = label_spatial(goals, t.future_trajectory());
    const auto g = std::count_if(label.goal_probs.begin(), label.goal_probs.end(), [](double p) { return p > 0; });
    if (scene.behavior == "off_map") {
      ++off_map;
      off_map_free += label.goal_free_prob == 1.0;
    } else if (scene.behavior == "lane_follow") {
      ++follow;
      follow_labeled += g >= 1;
    }
    if (g > 1) {
      ++shared;
      shared_ok += equal_shares(label);
    }
  }

  // Boundary fixtures for the tie tolerance (inclusive) and the follow
  // threshold (strict).
  const std::vector<GoalPath> one{parallel_goal(0.0, "a")};
  const std::vector<GoalPath> tie{parallel_goal(0.0, "a"), parallel_goal(0.1, "b")};
  const std::vector<GoalPath> no_tie{parallel_goal(0.0, "a"), parallel_goal(0.1001, "b")};
  const std::vector<GoalPath> four{
    parallel_goal(0.0, "a"), parallel_goal(0.03, "b"), parallel_goal(-0.05, "c"), parallel_goal(0.09, "d"),
    parallel_goal(2.0, "e")};
  const bool fixtures =
    label_spatial(one, straight_future(4.999)).goal_free_prob == 0.0 &&
    label_spatial(one, straight_future(5.0)).goal_free_prob == 1.0 &&
    label_spatial(tie, straight_future(0.0)).goal_probs == std::vector<double>{0.5, 0.5} &&
    label_spatial(no_tie, straight_future(0.0)).goal_probs == std::vector<double>{1.0, 0.0} &&
    label_spatial(four, straight_future(0.0)).goal_probs == std::vector<double>{0.25, 0.25, 0.25, 0.25, 0.0} &&
    equal_shares(label_spatial(four, straight_future(0.0)));

  const double rate = follow ? static_cast<double>(follow_labeled) / static_cast<double>(follow) : 0.0;
  const bool pass = off_map > 0 && off_map_free == off_map && rate >= kLaneFollowLabeledRate && shared > 0 &&
                    shared_ok == shared && fixtures;
  return {
    pass, fmt(
            "off_map goal-free %zu/%zu, lane_follow labeled %zu/%zu (%.3f), 1/G rule %zu/%zu, boundary fixtures %s",
            off_map_free, off_map, follow_labeled, follow, rate, shared_ok, shared, fixtures ? "ok" : "FAILED")};
}

// ---------------------------------------------------------------- 4, 5

ModelConfig reduced(std::size_t temporal, std::uint64_t seed)
{
  ModelConfig c;
  c.temporal_modes = temporal;
  c.history_hidden = 8;
  c.state_hidden = 8;
  c.cnn_channels = {8, 8, 8};
  c.graph_hidden = 8;
  c.seed = seed;
  return c;
}

ModelInput random_input(Rng & rng, std::size_t goals)
{
  ModelInput in;
  for (auto & p : in.history) p = {rng.uniform(-5, 0), rng.uniform(-1, 1)};
  for (auto & s : in.state) s = rng.uniform(-1, 1);
  for (auto & p : in.local_rollout) p = {rng.uniform(0, 40), rng.uniform(-1, 1)};
  for (std::size_t j = 0; j < goals; ++j) {
    GoalFeatures g;
    for (double & v : g.raster.cells) v = rng.bernoulli(0.1) ? rng.uniform(0, 1) : 0.0;
    for (auto & w : g.rollout.path_frame) w = {rng.uniform(0, 40), rng.uniform(-1, 1)};
    in.goals.push_back(std::move(g));
  }
  return in;
}

Outcome graph_properties()
{
  double worst_perm = 0.0;
  double worst_sum = 0.0;
  bool counts = true;
  std::size_t cases = 0;
  for (std::size_t m : {1u, 2u}) {
    ModelConfig config;
    config.temporal_modes = m;
    config.seed = 40 + m;
    const GoalGraphModel model(config);
    for (std::size_t n = 0; n <= 8; ++n) {
      for (int trial = 0; trial < 3; ++trial) {
        Rng rng(1000 * m + 10 * n + trial);
        const ModelInput in = random_input(rng, n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        ModelInput shuffled = in;
        for (std::size_t i = 0; i < n; ++i) shuffled.goals[i] = in.goals[perm[i]];

        const ModelOutput a = model.forward(in);
        const ModelOutput b = model.forward(shuffled);
        const std::size_t k = (n + 1) * m;
        counts = counts && a.num_modes() == k && a.joint_probs.value().size() == k &&
                 a.trajectories.shape()[0] == k && Prediction::from_output(a).joint_probs.size() == k;
        for (const ModelOutput * o : {&a, &b}) {
          const auto & p = o->joint_probs.value().data();
          worst_sum = std::max(worst_sum, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
        }
        // Row r of the shuffled output must equal row src(r) of the original.
        auto src = [&](std::size_t j) { return j < n ? perm[j] : n; };
        for (std::size_t j = 0; j <= n; ++j) {
          for (std::size_t t = 0; t < m; ++t) {
            const std::size_t rb = j * m + t;
            const std::size_t ra = src(j) * m + t;
            worst_perm = std::max(worst_perm, std::abs(b.joint_probs.value()[rb] - a.joint_probs.value()[ra]));
            for (std::size_t c = 0; c < kTrajectoryValues; ++c) {
              worst_perm =
                std::max(worst_perm, std::abs(b.trajectories.value().at(rb, c) - a.trajectories.value().at(ra, c)));
            }
          }
        }
        ++cases;
      }
    }
  }
  const bool pass = counts && worst_perm <= kEquivarianceTol && worst_sum <= kSumTol;
  return {
    pass, fmt(
            "%zu cases, N 0..8, M 1..2: equivariance %.2e, |sum - 1| %.2e, K = (N+1)M %s", cases, worst_perm,
            worst_sum, counts ? "ok" : "FAILED")};
}

struct Supervision
{
  std::vector<ModeTarget> targets;
  std::vector<std::vector<std::optional<ModeTrajectory>>> truth;
};

// Soft targets over up to two modes per actor, with ground truth a few
// centimeters from the model's current trajectories. Keeping the loss O(1)
// keeps rounding noise in the central differences well below 1e-10.
Supervision supervise(const GoalGraphModel & model, const std::vector<ModelInput> & inputs, Rng & rng)
{
  Supervision s;
  for (const auto & in : inputs) {
    const ModelOutput out = model.forward(in);
    const std::size_t k = out.num_modes();
    ModeTarget t;
    t.num_goals = out.num_goals;
    t.num_temporal = out.num_temporal;
    t.joint_probs.assign(k, 0.0);
    std::vector<std::optional<ModeTrajectory>> truth(k);
    const std::size_t first = rng.index(k);
    const std::size_t second = rng.index(k);
    t.joint_probs[first] += 0.5;
    t.joint_probs[second] += 0.5;
    for (std::size_t j : {first, second}) {
      ModeTrajectory traj;
      for (std::size_t c = 0; c < kTrajectoryValues; ++c) {
        const double offset = rng.uniform(0.005, 0.05);
        traj[c] = out.trajectories.value().at(j, c) + (rng.bernoulli(0.5) ? offset : -offset);
      }
      truth[j] = traj;
    }
    s.targets.push_back(std::move(t));
    s.truth.push_back(std::move(truth));
  }
  return s;
}

double batch_loss(
  const GoalGraphModel & model, const std::vector<ModelInput> & inputs, const Supervision & s, bool backward)
{
  std::vector<ModelOutput> outputs;
  for (const auto & in : inputs) outputs.push_back(model.forward(in));
  std::vector<LossTerm> terms;
  for (std::size_t i = 0; i < outputs.size(); ++i) terms.push_back({&s.targets[i], s.truth[i], &outputs[i]});
  const TotalLoss loss = total_loss(terms, {});
  if (backward) loss.value.backward();
  return loss.breakdown.total;
}

Outcome gradient_integrity()
{
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GoalGraphModel model(reduced(1 + seed % 2, seed));
    Rng rng(500 + seed);
    const std::vector<ModelInput> inputs{random_input(rng, seed % 6)};
    Rng target_rng(900 + seed);
    const Supervision supervision = supervise(model, inputs, target_rng);
    model.parameters().zero_grad();
    batch_loss(model, inputs, supervision, true);

    const auto & params = model.parameters().parameters();
    Rng pick(seed);
    // Two entries from every parameter tensor.
    for (const auto & p : params) {
      for (int r = 0; r < 2; ++r) {
        const std::size_t k = pick.index(p.value().size());
        const double analytic = p.gradient()[k];
        const double saved = p.value()[k];
        p.mutable_value()[k] = saved + kGradStep;
        const double up = batch_loss(model, inputs, supervision, false);
        p.mutable_value()[k] = saved - kGradStep;
        const double down = batch_loss(model, inputs, supervision, false);
        p.mutable_value()[k] = saved;
        const double numeric = (up - down) / (2 * kGradStep);
        const double err = std::abs(analytic - numeric) / std::max({1e-6, std::abs(analytic), std::abs(numeric)});
        worst = std::max(worst, err);
        ++checked;
      }
    }
  }
  return {worst < kGradRelTol, fmt("max relative error %.2e over %zu entries, 10 seeds", worst, checked)};
}

// ---------------------------------------------------------------- 6

ModeTrajectory constant_traj(double along, double cross)
{
  ModeTrajectory t{};
  for (std::size_t i = 0; i < kFutureLength; ++i) {
    t[2 * i] = along;
    t[2 * i + 1] = cross;
  }
  return t;
}

tensor::Var trajectory_var(const std::vector<ModeTrajectory> & modes)
{
  tensor::Array a({modes.size(), kTrajectoryValues});
  for (std::size_t k = 0; k < modes.size(); ++k) {
    for (std::size_t c = 0; c < kTrajectoryValues; ++c) a.at(k, c) = modes[k][c];
  }
  return tensor::Var(a, true);
}

tensor::Var column(std::vector<double> p)
{
  const std::size_t n = p.size();
  return tensor::Var(tensor::Array({n, 1}, std::move(p)), true);
}

ModeTarget make_target(std::vector<double> probs, std::size_t goals)
{
  ModeTarget t;
  t.joint_probs = std::move(probs);
  t.num_goals = goals;
  return t;
}

double total_for(
  const ModeTarget & target, const std::vector<std::optional<ModeTrajectory>> & truth, std::vector<double> probs,
  const std::vector<ModeTrajectory> & pred, const LossConfig & config)
{
  ModelOutput out;
  out.num_goals = target.num_goals;
  out.joint_probs = column(std::move(probs));
  out.trajectories = trajectory_var(pred);
  const std::vector<LossTerm> batch{{&target, truth, &out}};
  return total_loss(batch, config).value.value()[0];
}

Outcome loss_semantics()
{
  // Perfect predictions.
  const ModeTarget hard = make_target({0, 1, 0}, 2);
  const std::vector<std::optional<ModeTrajectory>> hard_truth{std::nullopt, constant_traj(7, -0.4), std::nullopt};
  const double perfect = total_for(
    hard, hard_truth, {0, 1, 0}, {constant_traj(1, 1), constant_traj(7, -0.4), constant_traj(3, 3)}, {});
  const ModeTarget soft = make_target({0.5, 0.5, 0}, 2);
  const std::vector<std::optional<ModeTrajectory>> soft_truth{constant_traj(2, 0.5), constant_traj(4, -1), std::nullopt};
  const double perfect_reg =
    regression_loss(soft, soft_truth, trajectory_var({constant_traj(2, 0.5), constant_traj(4, -1), constant_traj(9, 9)}), 5.0)
      .value()[0];
  const bool zero = std::abs(perfect) <= kExactTol && std::abs(perfect_reg) <= kExactTol;

  // Zero-target modes receive no regression gradient.
  Rng rng(66);
  bool gradients = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.index(7);
    std::vector<double> probs(k, 0.0);
    const std::size_t supported = 1 + rng.index(k - 1);
    for (std::size_t i = 0; i < supported; ++i) probs[rng.index(k)] = 1.0;
    const double s = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double & p : probs) p /= s;
    std::vector<std::optional<ModeTrajectory>> truth(k);
    std::vector<ModeTrajectory> pred(k);
    for (std::size_t j = 0; j < k; ++j) {
      pred[j] = constant_traj(rng.uniform(-5, 5), rng.uniform(-5, 5));
      if (probs[j] > 0) truth[j] = constant_traj(rng.uniform(-5, 5), rng.uniform(-5, 5));
    }
    const tensor::Var traj = trajectory_var(pred);
    regression_loss(make_target(probs, k - 1), truth, traj, 5.0).backward();
    for (std::size_t j = 0; j < k; ++j) {
      double magnitude = 0.0;
      for (std::size_t c = 0; c < kTrajectoryValues; ++c) magnitude += std::abs(traj.grad().at(j, c));
      gradients = gradients && (probs[j] == 0 ? magnitude == 0.0 : magnitude > 0.0);
    }
  }

  // Hand-computed fixtures: 12 waypoints, along error 0.5 and cross error 0.1.
  const ModeTarget single = make_target({1.0}, 0);
  const std::vector<std::optional<ModeTrajectory>> at_ten{constant_traj(10, 0)};
  auto reg = [&](const ModeTarget & t, const auto & truth, const std::vector<ModeTrajectory> & pred, double gamma) {
    return regression_loss(t, truth, trajectory_var(pred), gamma).value()[0];
  };
  const ModeTarget halves = make_target({0.5, 0.5}, 1);
  const std::vector<std::optional<ModeTrajectory>> origin{constant_traj(0, 0), constant_traj(0, 0)};
  const double f1 = reg(single, at_ten, {constant_traj(10.5, 0)}, 5.0);     // 12 * 0.5
  const double f2 = reg(single, at_ten, {constant_traj(10.5, 0.1)}, 5.0);   // 6 + 5 * 1.2
  const double f3 = reg(single, at_ten, {constant_traj(10.5, -0.1)}, 2.0);  // 6 + 2 * 1.2
  const double f4 = reg(halves, origin, {constant_traj(1, 0), constant_traj(0, 1)}, 5.0);  // 0.5 * 12 + 0.5 * 60
  const ModeTarget first = make_target({1, 0}, 1);
  const std::vector<std::optional<ModeTrajectory>> first_truth{constant_traj(10, 0), std::nullopt};
  const double f5 = total_for(
    first, first_truth, {0.5, 0.5}, {constant_traj(10.5, 0), constant_traj(0, 0)}, LossConfig{5.0, 0.7});
  const double e5 = std::log(2.0) + 0.7 * 6.0;
  const double fixture_err = std::max(
    {std::abs(f1 - 6.0), std::abs(f2 - 12.0), std::abs(f3 - 8.4), std::abs(f4 - 36.0), std::abs(f5 - e5)});

  const bool pass = zero && gradients && fixture_err <= kExactTol;
  return {
    pass, fmt(
            "perfect loss %.1e / %.1e, zero-target gradients %s, fixture error %.1e", perfect, perfect_reg,
            gradients ? "zero" : "NONZERO", fixture_err)};
}

// ---------------------------------------------------------------- 7

std::vector<Vec2> shifted_line(Vec2 start, Vec2 step, Vec2 shift)
{
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < kFutureLength; ++i) out.push_back(start + step * static_cast<double>(i) + shift);
  return out;
}

Outcome metric_suite()
{
  // Properties on every evaluated sample of a two-temporal-mode model.
  ModelConfig config;
  config.temporal_modes = 2;
  config.seed = 17;
  const GoalGraphModel model(config);
  std::size_t samples = 0, monotone = 0, bounded = 0;
  for (std::uint64_t seed = 20000; seed < 20300; ++seed) {
    const Scene scene = gen_scene("mixed", seed);
    const ActorState & t = scene.target();
    if (!eval_filter(t)) continue;
    const WorldPrediction wp = predict(model, t, scene.map, scene.actors);
    const ModeSet modes{wp.trajectories, wp.joint_probs};
    const SampleMetrics m = evaluate_sample(modes, *t.future, t.pose());
    const auto & k = m.by_k;
    ++samples;
    monotone += k.at("min_1").ade >= k.at("min_3").ade && k.at("min_3").ade >= k.at("min_5").ade &&
                k.at("min_5").ade >= k.at("min_10").ade && k.at("min_10").ade >= k.at("min_*").ade;
    bounded += m.expected_ade >= k.at("min_*").ade * (1.0 - kSumTol);
  }

  // Along/cross decomposition against the dense oracle on curved ground truth.
  Rng rng(34);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double r = rng.uniform(15, 40);
    const double speed = rng.uniform(4, 10);
    std::vector<Vec2> gt;
    for (std::size_t i = 1; i <= kFutureLength; ++i) {
      const double ang = speed * 0.5 * static_cast<double>(i) / r;
      gt.push_back({r * std::sin(ang), r - r * std::cos(ang)});
    }
    auto pred = gt;
    for (std::size_t i = 1; i + 1 < pred.size(); ++i) pred[i] = pred[i] + Vec2{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const auto reference = oracle::resample(gt, kGroundTruthSpacing);
    const AlongCrossError e = along_cross_error(pred, gt, {{0, 0}, 0});
    for (std::size_t t = 0; t < gt.size(); ++t) {
      const auto p = oracle::dense_closest(reference, pred[t]);
      const auto g = oracle::dense_closest(reference, gt[t]);
      worst = std::max({worst, std::abs(e.along[t] - std::abs(p.along - g.along)), std::abs(e.cross[t] - std::abs(p.cross))});
    }
  }

  // Straight fixtures with closed-form ATE and CTE.
  struct Fixture
  {
    Vec2 step;
    Vec2 shift;
    double along;
    double cross;
  };
  const std::vector<Fixture> fixtures{
    {{5, 0}, {0.5, 0.25}, 0.5, 0.25},
    {{5, 0}, {0, -1.5}, 0.0, 1.5},
    {{0, 2}, {0.75, 0.125}, 0.125, 0.75},
    {{-4, 0}, {-0.25, 2}, 0.25, 2.0},
  };
  double fixture_err = 0.0;
  for (const Fixture & f : fixtures) {
    const auto gt = shifted_line({3, -2}, f.step, {0, 0});
    const auto pred = shifted_line({3, -2}, f.step, f.shift);
    const AlongCrossError e = along_cross_error(pred, gt, {{3, -2}, 0});
    for (std::size_t t = 0; t < gt.size(); ++t) {
      fixture_err = std::max({fixture_err, std::abs(e.along[t] - f.along), std::abs(e.cross[t] - f.cross)});
    }
    fixture_err = std::max({fixture_err, std::abs(e.mean_along - f.along), std::abs(e.mean_cross - f.cross)});
  }

  const bool pass = samples > 0 && monotone == samples && bounded == samples && worst <= kOracleTol &&
                    fixture_err <= kExactTol;
  return {
    pass, fmt(
            "min_k monotone %zu/%zu, E[ADE] >= min_* %zu/%zu, oracle error %.2e, straight fixtures %.1e", monotone,
            samples, bounded, samples, worst, fixture_err)};
}

// ---------------------------------------------------------------- 8, 9

struct LearningData
{
  std::vector<Scene> train;
  std::vector<Scene> test;
};

// Sequential seeds, routed by their split.
const LearningData & learning_data()
{
  static const LearningData data = [] {
    LearningData d;
    for (std::uint64_t seed = 0; d.train.size() < kTrainScenes || d.test.size() < kTestScenes; ++seed) {
      const Split split = split_of(seed);
      if (split == Split::kTrain && d.train.size() < kTrainScenes) d.train.push_back(gen_scene("mixed", seed));
      if (split == Split::kTest && d.test.size() < kTestScenes) d.test.push_back(gen_scene("mixed", seed));
    }
    return d;
  }();
  return data;
}

Outcome end_to_end_learning()
{
  const LearningData & data = learning_data();
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig config;
  config.model.temporal_modes = 1;
  config.learning_rate = kLearningRate;
  config.epochs = kEpochs;
  config.final_learning_rate = kFinalLearningRate;
  GoalGraphModel model(config.model);
  tensor::Adam optimizer(model.parameters(), config.adam());
  const std::vector<TrainingSample> samples = make_training_samples(data.train, Split::kTrain);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    train_epoch(model, optimizer, samples, config, epoch);
  }
  const double train_seconds = seconds_since(t0);

  const EvaluationResult result = evaluate(model, data.test, std::nullopt);
  const double ade = result.model.all.by_k.at("min_1").ade;
  const double base = result.baseline.all.by_k.at("min_1").ade;
  const double improvement = 1.0 - ade / base;
  const bool pass = result.goal_accuracy() >= kGoalAccuracy && improvement >= kAdeImprovement &&
                    train_seconds <= kTrainSeconds;
  return {
    pass, fmt(
            "goal accuracy %.3f (%zu/%zu), min_1 ADE %.3f vs baseline %.3f (%.1f%% better), %zu training samples, "
            "%.0f s",
            result.goal_accuracy(), result.goal_hits, result.goal_samples, ade, base, 100.0 * improvement,
            samples.size(), train_seconds)};
}

Outcome map_adaptivity()
{
  const LearningData & data = learning_data();
  std::vector<double> counts;
  std::set<std::size_t> distinct;
  for (const Scene & scene : data.test) {
    const ActorState & t = scene.target();
    if (!eval_filter(t)) continue;
    const std::size_t n = propose_goal_paths(scene.map, t.centroid).size();
    counts.push_back(static_cast<double>(n));
    distinct.insert(n);
  }
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(counts.size()));
  const bool spans = distinct.count(1) && distinct.count(3) && distinct.count(4);

  // Off-map actors: no goals, so exactly M goal-free modes.
  std::size_t off_map = 0, valid = 0;
  for (std::size_t m : {1u, 2u}) {
    ModelConfig config;
    config.temporal_modes = m;
    const GoalGraphModel model(config);
    for (const Scene & scene : data.test) {
      const ActorState & t = scene.target();
      if (propose_goal_paths(scene.map, t.centroid).empty()) {
        ++off_map;
        const WorldPrediction wp = predict(model, t, scene.map, scene.actors);
        bool ok = wp.goals.empty() && wp.trajectories.size() == m && wp.joint_probs.size() == m;
        ok = ok && std::abs(std::accumulate(wp.joint_probs.begin(), wp.joint_probs.end(), 0.0) - 1.0) <= kSumTol;
        for (const auto & traj : wp.trajectories) {
          ok = ok && traj.size() == kFutureLength;
          for (const Vec2 & p : traj) ok = ok && std::isfinite(p.x) && std::isfinite(p.y);
        }
        valid += ok;
      }
    }
  }
  std::string seen;
  for (std::size_t n : distinct) seen += (seen.empty() ? "" : ",") + std::to_string(n);
  const bool pass = std_dev > 0.0 && spans && off_map > 0 && valid == off_map;
  return {
    pass, fmt(
            "N mean %.2f std %.2f over %zu actors, values {%s}, off-map predictions valid %zu/%zu", mean, std_dev,
            counts.size(), seen.c_str(), valid, off_map)};
}

// ---------------------------------------------------------------- 10

std::string slurp(const std::string & path) { return oracle::read_file(path); }

Outcome determinism()
{
  const fs::path root = fs::temp_directory_path() / "goalpath_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::vector<Scene> scenes;
  for (std::uint64_t seed = 300; scenes.size() < 60; ++seed) scenes.push_back(gen_scene("mixed", seed));
  const std::string data = (root / "scenes.jsonl").string();
  write_dataset(data, scenes);

  struct Artifacts
  {
    std::string checkpoint, losses, report, svg;
  };
  auto run = [&](const std::string & name) {
    fs::create_directories(root / name);
    RunConfig config;
    config.data = data;
    config.checkpoint = (root / name / "model.json").string();
    config.loss_csv = (root / name / "loss.csv").string();
    config.epochs = 2;
    config.batch_size = 8;
    config.seed = 5;
    config.model.seed = 5;
    config.model.temporal_modes = 2;
    run_training(config);
    const GoalGraphModel model = model_from_checkpoint(load_checkpoint(config.checkpoint));
    Artifacts a{slurp(config.checkpoint), slurp(config.loss_csv), "", ""};
    a.report = evaluation_to_json(evaluate(model, read_dataset(data), std::nullopt)).dump(2);
    for (std::size_t i = 0; i < 10; ++i) {
      const ActorState & t = scenes[i].target();
      a.svg += render_svg(scenes[i].map, t, predict(model, t, scenes[i].map, scenes[i].actors));
    }
    return a;
  };
  const Artifacts first = run("a");
  const Artifacts second = run("b");
  fs::remove_all(root);
  const bool ck = !first.checkpoint.empty() && first.checkpoint == second.checkpoint;
  const bool losses = !first.losses.empty() && first.losses == second.losses;
  const bool report = first.report == second.report;
  const bool svg = !first.svg.empty() && first.svg == second.svg;
  auto word = [](bool b) { return b ? "identical" : "DIFFERENT"; };
  return {
    ck && losses && report && svg, fmt(
                                     "checkpoint %s (%zu bytes), loss csv %s, eval report %s, svg %s", word(ck),
                                     first.checkpoint.size(), word(losses), word(report), word(svg))};
}

struct Criterion
{
  int id;
  const char * name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
  {1, "frenet correctness", frenet_correctness},
  {2, "analytic frenet cases", analytic_frenet},
  {3, "auto-labeling", auto_labeling},
  {4, "graph network properties", graph_properties},
  {5, "gradient integrity", gradient_integrity},
  {6, "loss semantics", loss_semantics},
  {7, "metric suite", metric_suite},
  {8, "end-to-end learning", end_to_end_learning},
  {9, "map adaptivity", map_adaptivity},
  {10, "determinism", determinism},
};

}  // namespace

int main(int argc, char ** argv)
{
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion & c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf(
      "%s  %2d  %-26s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
