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

#include "goalpath/model.hpp"

#include "goalpath/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>
#include <utility>

namespace goalpath
{

using tensor::Array;
using tensor::Var;

namespace
{

// Fixed input scalings that bring every feature to roughly unit range.
constexpr double kHistoryScale = 0.1;
constexpr std::array<double, kStateFeatureSize> kStateScale{0.1, 0.5, 0.5, 1.0};
constexpr std::array<double, PathRaster::kChannels> kRasterScale{10.0, 1.0, 0.1, 1.0, 1.0, 1.0, 1.0, 1.0};
constexpr double kAlongScale = 0.05;
constexpr double kCrossScale = 0.2;

}  // namespace

nlohmann::json ModelConfig::to_json() const
{
  return {
    {"temporal_modes", temporal_modes},
    {"history_hidden", history_hidden},
    {"state_hidden", state_hidden},
    {"cnn_channels", cnn_channels},
    {"graph_hidden", graph_hidden},
    {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json & j)
{
  ModelConfig c;
  try {
    c.temporal_modes = j.at("temporal_modes").get<std::size_t>();
    c.history_hidden = j.at("history_hidden").get<std::size_t>();
    c.state_hidden = j.at("state_hidden").get<std::size_t>();
    c.cnn_channels = j.at("cnn_channels").get<std::array<std::size_t, 3>>();
    c.graph_hidden = j.at("graph_hidden").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception & e) {
    throw data_error(std::string("model config: ") + e.what());
  }
  return c;
}

ModelInput build_model_input(
  const ActorState & target, std::span<const ActorState> scene_actors, const LaneMap & map,
  std::span<const GoalPath> goals)
{
  ModelInput input;
  input.history = actor_history_features(target);
  input.state = actor_state_features(target);
  const Pose2 pose = target.pose();
  const auto rollout = kinematic_future(target);
  for (std::size_t i = 0; i < kFutureLength; ++i) {
    input.local_rollout[i] = pose.to_local(rollout[i]);
  }
  input.goals.reserve(goals.size());
  for (const auto & goal : goals) {
    input.goals.push_back(
      {build_raster(goal.path, scene_actors, target, map), kinematic_rollout(target, goal.path)});
  }
  return input;
}

Prediction Prediction::from_output(const ModelOutput & out)
{
  Prediction p;
  p.num_goals = out.num_goals;
  p.num_temporal = out.num_temporal;
  const std::size_t m_count = out.num_temporal;
  const Array & traj = out.trajectories.value();
  auto row_pairs = [&](std::size_t row) {
    std::vector<std::pair<double, double>> pairs(kFutureLength);
    for (std::size_t t = 0; t < kFutureLength; ++t) {
      pairs[t] = {traj.at(row, 2 * t), traj.at(row, 2 * t + 1)};
    }
    return pairs;
  };
  for (std::size_t j = 0; j < out.num_goals; ++j) {
    for (std::size_t m = 0; m < m_count; ++m) {
      std::vector<PathWaypoint> wps;
      for (std::size_t t = 0; const auto & [a, c] : row_pairs(j * m_count + m)) {
        wps.push_back({kFutureStep * static_cast<double>(++t), a, c});
      }
      p.goal_trajectories.push_back(std::move(wps));
    }
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    std::vector<Vec2> pts;
    for (const auto & [x, y] : row_pairs(out.num_goals * m_count + m)) pts.push_back({x, y});
    p.free_trajectories.push_back(std::move(pts));
  }
  const auto copy = [](const Var & v) {
    return std::vector<double>(v.value().data().begin(), v.value().data().end());
  };
  p.spatial_scores = copy(out.spatial_scores);
  p.temporal_scores = copy(out.temporal_scores);
  p.joint_probs = copy(out.joint_probs);
  return p;
}

GoalGraphModel::GoalGraphModel(ModelConfig config) : config_(std::move(config))
{
  if (config_.temporal_modes == 0) {
    throw usage_error("temporal_modes must be at least 1");
  }
  std::uint64_t rng = config_.seed;
  const std::size_t hh = config_.history_hidden;
  gru_w_input_ = params_.add("history.w_input", {2, 3 * hh}, 2, rng);
  gru_w_hidden_ = params_.add("history.w_hidden", {hh, 3 * hh}, hh, rng);
  gru_b_input_ = params_.add("history.b_input", {1, 3 * hh}, hh, rng);
  gru_b_hidden_ = params_.add("history.b_hidden", {1, 3 * hh}, hh, rng);
  state_encoder_ = make_dense("state", kStateFeatureSize, config_.state_hidden, rng);

  std::size_t c_in = PathRaster::kChannels;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t c_out = config_.cnn_channels[i];
    const std::string name = "raster.conv" + std::to_string(i);
    conv_kernels_[i] = params_.add(name + ".kernel", {c_out, c_in, 3}, 3 * c_in, rng);
    conv_biases_[i] = params_.add(name + ".bias", {c_out}, 3 * c_in, rng);
    c_in = c_out;
  }

  const std::size_t actor_dim = hh + config_.state_hidden;
  const std::size_t goal_dim = config_.cnn_channels[2];
  const std::size_t h = config_.graph_hidden;
  for (std::size_t l = 0; l < 2; ++l) {
    const std::string name = "graph" + std::to_string(l);
    const std::size_t a_in = l == 0 ? actor_dim : h;
    const std::size_t e_in = l == 0 ? kEdgeFeatureSize : h;
    layers_[l].edge = make_mlp(name + ".edge", a_in + e_in + goal_dim, h, h, rng);
    layers_[l].actor = make_mlp(name + ".actor", a_in + h, h, h, rng);
  }
  const std::size_t out_dim = 1 + config_.temporal_modes * (1 + kTrajectoryValues);
  edge_head_ = make_dense("head.edge", h, out_dim, rng);
  actor_head_ = make_dense("head.actor", h, out_dim, rng);
}

GoalGraphModel::Dense GoalGraphModel::make_dense(
  const std::string & name, std::size_t in, std::size_t out, std::uint64_t & rng)
{
  return {params_.add(name + ".w", {in, out}, in, rng), params_.add(name + ".b", {1, out}, in, rng)};
}

GoalGraphModel::Mlp GoalGraphModel::make_mlp(
  const std::string & name, std::size_t in, std::size_t hidden, std::size_t out, std::uint64_t & rng)
{
  Mlp m;
  m.first = make_dense(name + ".0", in, hidden, rng);
  m.second = make_dense(name + ".1", hidden, out, rng);
  return m;
}

Var GoalGraphModel::apply(const Dense & d, const Var & x) { return tensor::linear(x, d.w, d.b); }

Var GoalGraphModel::apply(const Mlp & m, const Var & x)
{
  return tensor::relu(apply(m.second, tensor::relu(apply(m.first, x))));
}

Var GoalGraphModel::encode_raster(const PathRaster & raster) const
{
  constexpr std::size_t rows = PathRaster::kRows, cols = PathRaster::kCols;
  Array x({PathRaster::kChannels, rows, cols});
  for (std::size_t ch = 0; ch < PathRaster::kChannels; ++ch)
    for (std::size_t l = 0; l < rows; ++l)
      for (std::size_t w = 0; w < cols; ++w) x[(ch * rows + l) * cols + w] = raster.at(l, w, ch) * kRasterScale[ch];
  Var h(std::move(x));
  for (std::size_t i = 0; i < 3; ++i) {
    h = tensor::relu(tensor::conv2d(h, conv_kernels_[i], conv_biases_[i]));
  }
  h = tensor::maxpool2d(h, rows, cols);
  return tensor::reshape(h, {1, config_.cnn_channels[2]});
}

GraphInputs GoalGraphModel::encode(const ModelInput & input) const
{
  GraphInputs g;
  g.num_goals = input.goals.size();

  Var h(Array({1, config_.history_hidden}, 0.0));
  for (const auto & p : input.history) {
    const Var x(Array::row({p.x * kHistoryScale, p.y * kHistoryScale}));
    h = tensor::recurrent_step(x, h, gru_w_input_, gru_w_hidden_, gru_b_input_, gru_b_hidden_);
  }
  std::vector<double> state(kStateFeatureSize);
  for (std::size_t i = 0; i < kStateFeatureSize; ++i) state[i] = input.state[i] * kStateScale[i];
  const Var s = tensor::relu(apply(state_encoder_, Var(Array::row(std::move(state)))));
  g.actor = tensor::concat_cols({h, s});

  const std::size_t n = g.num_goals;
  g.goal_anchor = Array({n, kTrajectoryValues});
  g.free_anchor = Array({1, kTrajectoryValues});
  for (std::size_t t = 0; t < kFutureLength; ++t) {
    g.free_anchor[2 * t] = input.local_rollout[t].x;
    g.free_anchor[2 * t + 1] = input.local_rollout[t].y;
  }
  if (n == 0) {
    return g;
  }

  std::vector<Var> goal_rows;
  Array edges({n, kEdgeFeatureSize});
  for (std::size_t j = 0; j < n; ++j) {
    const auto & goal = input.goals[j];
    goal_rows.push_back(encode_raster(goal.raster));
    const auto & wps = goal.rollout.path_frame;
    for (std::size_t t = 0; t < kRolloutLength; ++t) {
      edges.at(j, 2 * t) = wps[t].along * kAlongScale;
      edges.at(j, 2 * t + 1) = wps[t].cross * kCrossScale;
    }
    for (std::size_t t = 0; t < kFutureLength; ++t) {
      g.goal_anchor.at(j, 2 * t) = wps[t + 1].along;
      g.goal_anchor.at(j, 2 * t + 1) = wps[0].cross;
    }
  }
  g.goals = tensor::concat_rows(goal_rows);
  g.edges = Var(std::move(edges));
  return g;
}

ModelOutput GoalGraphModel::graph_forward(const GraphInputs & inputs) const
{
  const std::size_t n = inputs.num_goals;
  const std::size_t m = config_.temporal_modes;
  const std::size_t h = config_.graph_hidden;

  Var actor = inputs.actor;
  Var edges = inputs.edges;
  for (const auto & layer : layers_) {
    Var mean_edge;
    if (n > 0) {
      edges = apply(layer.edge, tensor::concat_cols({tensor::repeat_rows(actor, n), edges, inputs.goals}));
      mean_edge = tensor::mean_rows(edges);
    } else {
      mean_edge = Var(Array({1, h}, 0.0));
    }
    actor = apply(layer.actor, tensor::concat_cols({actor, mean_edge}));
  }

  const std::size_t traj_begin = 1 + m;
  const std::size_t out_dim = traj_begin + m * kTrajectoryValues;
  const Var actor_out = apply(actor_head_, actor);
  const Var actor_traj = tensor::add(
    tensor::reshape(tensor::slice_cols(actor_out, traj_begin, out_dim), {m, kTrajectoryValues}),
    tensor::repeat_rows(Var(inputs.free_anchor), m));

  ModelOutput out;
  out.num_goals = n;
  out.num_temporal = m;
  if (n > 0) {
    const Var edge_out = apply(edge_head_, edges);
    Array anchor({n * m, kTrajectoryValues});
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t c = 0; c < kTrajectoryValues; ++c) anchor.at(j * m + k, c) = inputs.goal_anchor.at(j, c);
    const Var edge_traj = tensor::add(
      tensor::reshape(tensor::slice_cols(edge_out, traj_begin, out_dim), {n * m, kTrajectoryValues}),
      Var(std::move(anchor)));
    out.spatial_scores = tensor::concat_rows({tensor::slice_cols(edge_out, 0, 1), tensor::slice_cols(actor_out, 0, 1)});
    out.temporal_scores =
      tensor::concat_rows({tensor::slice_cols(edge_out, 1, traj_begin), tensor::slice_cols(actor_out, 1, traj_begin)});
    out.trajectories = tensor::concat_rows({edge_traj, actor_traj});
  } else {
    out.spatial_scores = tensor::slice_cols(actor_out, 0, 1);
    out.temporal_scores = tensor::slice_cols(actor_out, 1, traj_begin);
    out.trajectories = actor_traj;
  }
  out.spatial_probs =
    tensor::reshape(tensor::softmax_rows(tensor::reshape(out.spatial_scores, {1, n + 1})), {n + 1, 1});
  out.temporal_probs = tensor::softmax_rows(out.temporal_scores);
  out.joint_probs = tensor::mul_col_broadcast(out.spatial_probs, out.temporal_probs);
  return out;
}

std::vector<std::vector<Vec2>> to_world(
  const Prediction & prediction, std::span<const GoalPath> goals, const Pose2 & actor_pose)
{
  if (goals.size() != prediction.num_goals) {
    throw data_error("to_world: goal count does not match the prediction");
  }
  std::vector<std::vector<Vec2>> out;
  out.reserve(prediction.joint_probs.size());
  for (std::size_t j = 0; j < prediction.num_goals; ++j) {
    for (std::size_t m = 0; m < prediction.num_temporal; ++m) {
      std::vector<Vec2> pts;
      for (const auto & wp : prediction.goal_trajectories[j * prediction.num_temporal + m]) {
        pts.push_back(unproject_point(goals[j].path, std::max(wp.along, 0.0), wp.cross));
      }
      out.push_back(std::move(pts));
    }
  }
  for (const auto & local : prediction.free_trajectories) {
    std::vector<Vec2> pts;
    for (const auto & p : local) pts.push_back(actor_pose.to_world(p));
    out.push_back(std::move(pts));
  }
  return out;
}

WorldPrediction predict(
  const GoalGraphModel & model, const ActorState & actor, const LaneMap & map,
  std::span<const ActorState> scene_actors)
{
  WorldPrediction wp;
  wp.goals = propose_goal_paths(map, actor.centroid);
  const ModelInput input = build_model_input(actor, scene_actors, map, wp.goals);
  wp.raw = Prediction::from_output(model.forward(input));
  wp.trajectories = to_world(wp.raw, wp.goals, actor.pose());
  wp.joint_probs = wp.raw.joint_probs;
  return wp;
}

}  // namespace goalpath
