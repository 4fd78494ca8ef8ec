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

#include "goalpath/evaluation.hpp"

#include "goalpath/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace goalpath
{

std::size_t most_probable_spatial_mode(const Prediction & prediction)
{
  const std::size_t m = prediction.num_temporal;
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t j = 0; j <= prediction.num_goals; ++j) {
    double p = 0.0;
    for (std::size_t t = 0; t < m; ++t) p += prediction.joint_probs[j * m + t];
    if (p > best_p) {
      best_p = p;
      best = j;
    }
  }
  return best;
}

EvaluationResult evaluate(
  const GoalGraphModel & model, const std::vector<Scene> & scenes, std::optional<Split> split)
{
  EvaluationResult result;
  ReportAccumulator model_acc;
  ReportAccumulator baseline_acc;
  for (const Scene & scene : scenes) {
    if (split && split_of(scene.seed) != *split) continue;
    const ActorState & target = scene.target();
    if (!eval_filter(target)) continue;

    const WorldPrediction wp = predict(model, target, scene.map, scene.actors);
    const std::vector<Vec2> & gt = *target.future;
    const bool turning = turning_filter(target);

    ModeSet modes{wp.trajectories, wp.joint_probs};
    model_acc.add(evaluate_sample(modes, gt, target.pose()), turning);
    ModeSet kinematic{{kinematic_future(target)}, {1.0}};
    baseline_acc.add(evaluate_sample(kinematic, gt, target.pose()), turning);

    result.goal_counts.push_back(wp.goals.size());
    const SpatialTarget label = label_spatial(wp.goals, target.future_trajectory());
    if (label.goal_free_prob == 0.0) {
      ++result.goal_samples;
      if (label.spatial_prob(most_probable_spatial_mode(wp.raw)) > 0.0) ++result.goal_hits;
    }
  }
  result.model = model_acc.finalize();
  result.baseline = baseline_acc.finalize();
  return result;
}

nlohmann::json evaluation_to_json(const EvaluationResult & r)
{
  nlohmann::json j;
  j["model"] = report_to_json(r.model);
  j["kinematic_baseline"] = report_to_json(r.baseline);
  j["goal_classification"] = {
    {"samples", r.goal_samples}, {"hits", r.goal_hits}, {"accuracy", r.goal_accuracy()}};
  double mean = 0.0;
  for (std::size_t n : r.goal_counts) mean += static_cast<double>(n);
  mean = r.goal_counts.empty() ? 0.0 : mean / static_cast<double>(r.goal_counts.size());
  double var = 0.0;
  for (std::size_t n : r.goal_counts) var += (static_cast<double>(n) - mean) * (static_cast<double>(n) - mean);
  var = r.goal_counts.empty() ? 0.0 : var / static_cast<double>(r.goal_counts.size());
  j["goal_count"] = {{"mean", mean}, {"std", std::sqrt(var)}};
  return j;
}

std::string evaluation_to_table(const EvaluationResult & r)
{
  std::string out = "model\n" + report_to_table(r.model);
  out += "kinematic baseline\n" + report_to_table(r.baseline);
  char buf[128];
  std::snprintf(
    buf, sizeof(buf), "goal classification: %zu/%zu (%.3f)\n", r.goal_hits, r.goal_samples, r.goal_accuracy());
  return out + buf;
}

}  // namespace goalpath
