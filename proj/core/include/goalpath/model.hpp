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

#ifndef GOALPATH__MODEL_HPP_
#define GOALPATH__MODEL_HPP_

#include "goalpath/features.hpp"
#include "goalpath/lane_map.hpp"
#include "goalpath/tensor.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace goalpath
{

struct ModelConfig
{
  // Temporal modes per spatial mode (1 or 2 in practice).
  std::size_t temporal_modes{1};
  std::size_t history_hidden{64};
  std::size_t state_hidden{32};
  std::array<std::size_t, 3> cnn_channels{16, 32, 32};
  std::size_t graph_hidden{64};
  std::uint64_t seed{0};

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json & j);
};

// Values per trajectory row: (along, cross) for each of the 12 waypoints.
inline constexpr std::size_t kTrajectoryValues = 2 * kFutureLength;
inline constexpr std::size_t kEdgeFeatureSize = 2 * kRolloutLength;

struct GoalFeatures
{
  PathRaster raster;
  KinematicRollout rollout;
};

struct ModelInput
{
  std::array<Vec2, kHistoryLength> history{};
  std::array<double, kStateFeatureSize> state{};
  // Kinematic rollout in the actor-centric frame at t = 0.5 .. 6 s.
  std::array<Vec2, kFutureLength> local_rollout{};
  std::vector<GoalFeatures> goals;
};

ModelInput build_model_input(
  const ActorState & target, std::span<const ActorState> scene_actors, const LaneMap & map,
  std::span<const GoalPath> goals);

/// Encoded graph: one actor node, N goal nodes, and N goal-to-actor edges.
struct GraphInputs
{
  std::size_t num_goals{0};
  tensor::Var actor;  // [1 x (history_hidden + state_hidden)]
  tensor::Var goals;  // [N x cnn_channels[2]], undefined when N = 0
  tensor::Var edges;  // [N x 26], undefined when N = 0
  // Decoding anchors added to the trajectory heads: per goal the rollout's
  // along-track values with the current cross-track offset held, and the
  // actor-centric rollout for the goal-free mode.
  tensor::Array goal_anchor;  // [N x 24]
  tensor::Array free_anchor;  // [1 x 24]
};

/// Differentiable model output for one actor.
struct ModelOutput
{
  std::size_t num_goals{0};
  std::size_t num_temporal{1};
  tensor::Var spatial_scores;   // [(N+1) x 1], goals first, goal-free last
  tensor::Var temporal_scores;  // [(N+1) x M]
  tensor::Var spatial_probs;    // [(N+1) x 1]
  tensor::Var temporal_probs;   // [(N+1) x M], row-wise softmax
  tensor::Var joint_probs;      // [(N+1) x M] = spatial_probs * temporal_probs
  tensor::Var trajectories;     // [K x 24], row k = spatial * M + temporal

  std::size_t num_modes() const { return (num_goals + 1) * num_temporal; }
};

/// Plain-value prediction.
struct Prediction
{
  std::size_t num_goals{0};
  std::size_t num_temporal{1};
  // Index j * M + m; path frame of goal j.
  std::vector<std::vector<PathWaypoint>> goal_trajectories;
  // Actor-centric (x = along heading, y = left), one per temporal mode.
  std::vector<std::vector<Vec2>> free_trajectories;
  std::vector<double> spatial_scores;
  std::vector<double> temporal_scores;
  std::vector<double> joint_probs;

  static Prediction from_output(const ModelOutput & out);
};

class GoalGraphModel
{
public:
  explicit GoalGraphModel(ModelConfig config);

  const ModelConfig & config() const { return config_; }
  tensor::ParameterStore & parameters() { return params_; }
  const tensor::ParameterStore & parameters() const { return params_; }

  GraphInputs encode(const ModelInput & input) const;
  ModelOutput graph_forward(const GraphInputs & inputs) const;
  ModelOutput forward(const ModelInput & input) const { return graph_forward(encode(input)); }

private:
  struct Dense
  {
    tensor::Var w;
    tensor::Var b;
  };
  struct Mlp
  {
    Dense first;
    Dense second;
  };
  struct GraphLayer
  {
    Mlp edge;
    Mlp actor;
  };

  Dense make_dense(const std::string & name, std::size_t in, std::size_t out, std::uint64_t & rng);
  Mlp make_mlp(const std::string & name, std::size_t in, std::size_t hidden, std::size_t out, std::uint64_t & rng);
  static tensor::Var apply(const Dense & d, const tensor::Var & x);
  static tensor::Var apply(const Mlp & m, const tensor::Var & x);
  tensor::Var encode_raster(const PathRaster & raster) const;

  ModelConfig config_;
  tensor::ParameterStore params_;

  tensor::Var gru_w_input_, gru_w_hidden_, gru_b_input_, gru_b_hidden_;
  Dense state_encoder_;
  std::array<tensor::Var, 3> conv_kernels_;
  std::array<tensor::Var, 3> conv_biases_;
  std::array<GraphLayer, 2> layers_;
  Dense edge_head_;
  Dense actor_head_;
};

/// World-frame output of the full pipeline for one actor.
struct WorldPrediction
{
  std::vector<GoalPath> goals;
  // K trajectories at t = 0.5 .. 6 s, spatial-major as in ModelOutput.
  std::vector<std::vector<Vec2>> trajectories;
  std::vector<double> joint_probs;
  Prediction raw;
};

// Goal proposal, feature building, graph forward, and conversion back to the
// world frame. Negative predicted along-track values are clamped to 0 before
// unprojection.
WorldPrediction predict(
  const GoalGraphModel & model, const ActorState & actor, const LaneMap & map,
  std::span<const ActorState> scene_actors);

// World-frame trajectories for a prediction over the given goals.
std::vector<std::vector<Vec2>> to_world(
  const Prediction & prediction, std::span<const GoalPath> goals, const Pose2 & actor_pose);

}  // namespace goalpath

#endif  // GOALPATH__MODEL_HPP_
