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

#include "goalpath/labeling.hpp"

#include "goalpath/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace goalpath
{

double max_cross_track_deviation(const ReferencePath & path, const CartesianTrajectory & future)
{
  if (future.empty()) {
    throw data_error("max_cross_track_deviation: empty future");
  }
  double worst = 0.0;
  for (const auto & wp : future) {
    worst = std::max(worst, std::abs(closest_point_on_path(path, wp.position).cross));
  }
  return worst;
}

SpatialTarget label_spatial(
  std::span<const GoalPath> paths, const CartesianTrajectory & future, const AutoLabelConfig & config)
{
  SpatialTarget target;
  target.goal_probs.assign(paths.size(), 0.0);
  target.goal_free_prob = 1.0;
  if (paths.empty()) {
    return target;
  }

  std::vector<double> deviation(paths.size());
  for (std::size_t n = 0; n < paths.size(); ++n) {
    deviation[n] = max_cross_track_deviation(paths[n].path, future);
  }
  const double best = *std::min_element(deviation.begin(), deviation.end());
  if (!(best < config.follow_threshold)) {
    return target;
  }

  std::size_t followed = 0;
  for (double d : deviation) {
    if (d - best <= config.tie_tolerance) ++followed;
  }
  const double share = 1.0 / static_cast<double>(followed);
  for (std::size_t n = 0; n < paths.size(); ++n) {
    if (deviation[n] - best <= config.tie_tolerance) {
      target.goal_probs[n] = share;
    }
  }
  target.goal_free_prob = 0.0;
  return target;
}

std::size_t label_temporal(
  std::span<const std::vector<Vec2>> predicted, std::span<const Vec2> ground_truth)
{
  if (predicted.empty()) {
    throw data_error("label_temporal: no temporal modes");
  }
  std::size_t best = 0;
  double best_ade = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < predicted.size(); ++m) {
    const double ade = mean_distance(predicted[m], ground_truth);
    if (ade < best_ade) {
      best_ade = ade;
      best = m;
    }
  }
  return best;
}

ModeTarget build_mode_target(
  const SpatialTarget & spatial, std::span<const std::optional<std::size_t>> temporal_indices,
  std::size_t num_temporal)
{
  const std::size_t spatial_modes = spatial.num_goals() + 1;
  if (temporal_indices.size() != spatial_modes) {
    throw data_error(
      "build_mode_target: expected " + std::to_string(spatial_modes) + " temporal indices, got " +
      std::to_string(temporal_indices.size()));
  }
  ModeTarget target;
  target.num_goals = spatial.num_goals();
  target.num_temporal = num_temporal;
  target.joint_probs.assign(spatial_modes * num_temporal, 0.0);
  for (std::size_t j = 0; j < spatial_modes; ++j) {
    const double p = spatial.spatial_prob(j);
    if (p == 0.0) {
      continue;
    }
    if (!temporal_indices[j] || *temporal_indices[j] >= num_temporal) {
      throw data_error("build_mode_target: missing temporal index for spatial mode " + std::to_string(j));
    }
    target.joint_probs[target.index(j, *temporal_indices[j])] = p;
  }
  return target;
}

}  // namespace goalpath
