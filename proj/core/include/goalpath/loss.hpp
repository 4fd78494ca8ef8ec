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

#ifndef GOALPATH__LOSS_HPP_
#define GOALPATH__LOSS_HPP_

#include "goalpath/labeling.hpp"
#include "goalpath/model.hpp"
#include "goalpath/tensor.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace goalpath
{

struct LossConfig
{
  // Up-weights cross-track error in the regression term (gamma).
  double cross_weight{5.0};
  // Balance between classification and regression (lambda).
  double regression_weight{1.0};
};

// Ground truth in one mode's own frame: (along, cross) per waypoint for goal
// modes, actor-centric (x, y) for goal-free modes.
using ModeTrajectory = std::array<double, kTrajectoryValues>;

struct LossBreakdown
{
  double cls{0.0};
  double reg{0.0};
  double total{0.0};
  std::vector<double> per_actor_cls;
  std::vector<double> per_actor_reg;
};

// -sum_k target_k * log(max(predicted_k, 1e-12)).
tensor::Var classification_loss(const ModeTarget & target, const tensor::Var & joint_probs);
double classification_loss(const ModeTarget & target, std::span<const double> joint_probs);

// sum over supported modes of p_k * (|along error|_1 + gamma * |cross error|_1).
// `ground_truth` has one entry per mode and must be set wherever the target
// probability is nonzero.
tensor::Var regression_loss(
  const ModeTarget & target, std::span<const std::optional<ModeTrajectory>> ground_truth,
  const tensor::Var & trajectories, double cross_weight);

struct LossTerm
{
  const ModeTarget * target;
  std::span<const std::optional<ModeTrajectory>> ground_truth;
  const ModelOutput * output;
};

struct TotalLoss
{
  tensor::Var value;
  LossBreakdown breakdown;
};

// Sum over actors of cls + lambda * reg.
TotalLoss total_loss(std::span<const LossTerm> batch, const LossConfig & config);

}  // namespace goalpath

#endif  // GOALPATH__LOSS_HPP_
