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

#ifndef GOALPATH__LABELING_HPP_
#define GOALPATH__LABELING_HPP_

#include "goalpath/frenet.hpp"
#include "goalpath/lane_map.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace goalpath
{

struct SpatialTarget
{
  // One entry per goal path; nonzero entries all equal 1/G.
  std::vector<double> goal_probs;
  // Either 0 or 1.
  double goal_free_prob{1.0};

  std::size_t num_goals() const { return goal_probs.size(); }
  // Probability of spatial mode j, where j == num_goals() is the goal-free mode.
  double spatial_prob(std::size_t j) const
  {
    return j < goal_probs.size() ? goal_probs[j] : goal_free_prob;
  }
};

// Joint target over K = (N + 1) * M modes, ordered spatial-major:
// (g0,t0), (g0,t1), ..., (free,t0), (free,t1), ...
struct ModeTarget
{
  std::vector<double> joint_probs;
  std::size_t num_goals{0};
  std::size_t num_temporal{1};

  std::size_t index(std::size_t spatial, std::size_t temporal) const
  {
    return spatial * num_temporal + temporal;
  }
};

struct AutoLabelConfig
{
  // Paths whose deviation is within this of the best one are also followed.
  double tie_tolerance{0.1};
  // The best path counts as followed only when its deviation is below this.
  double follow_threshold{5.0};
};

// Maximum |cross-track| of the future over the path.
double max_cross_track_deviation(const ReferencePath & path, const CartesianTrajectory & future);

SpatialTarget label_spatial(
  std::span<const GoalPath> paths, const CartesianTrajectory & future,
  const AutoLabelConfig & config = {});

// Index of the prediction with the lowest average displacement to the ground
// truth; ties go to the lowest index.
std::size_t label_temporal(
  std::span<const std::vector<Vec2>> predicted, std::span<const Vec2> ground_truth);

// `temporal_indices` has one entry per spatial mode (goals, then goal-free);
// entries must be set for every mode with nonzero spatial probability.
ModeTarget build_mode_target(
  const SpatialTarget & spatial, std::span<const std::optional<std::size_t>> temporal_indices,
  std::size_t num_temporal);

}  // namespace goalpath

#endif  // GOALPATH__LABELING_HPP_
