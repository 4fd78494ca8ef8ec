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

#ifndef GOALPATH__EVALUATION_HPP_
#define GOALPATH__EVALUATION_HPP_

#include "goalpath/dataio.hpp"
#include "goalpath/metrics.hpp"
#include "goalpath/model.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace goalpath
{

struct EvaluationResult
{
  EvalReport model;
  // Constant-acceleration extrapolation as a single mode.
  EvalReport baseline;
  // Goal-following samples and how often the most probable spatial mode was
  // one of the labeled goals.
  std::size_t goal_samples{0};
  std::size_t goal_hits{0};
  // Goal count per evaluated sample, in dataset order.
  std::vector<std::size_t> goal_counts;

  double goal_accuracy() const
  {
    return goal_samples == 0 ? 0.0 : static_cast<double>(goal_hits) / static_cast<double>(goal_samples);
  }
};

// Index of the spatial mode with the largest summed joint probability; ties go
// to the lower index.
std::size_t most_probable_spatial_mode(const Prediction & prediction);

// Every scene whose seed falls in `split` (all scenes when unset) and whose
// target passes eval_filter.
EvaluationResult evaluate(
  const GoalGraphModel & model, const std::vector<Scene> & scenes, std::optional<Split> split);

nlohmann::json evaluation_to_json(const EvaluationResult & result);
std::string evaluation_to_table(const EvaluationResult & result);

}  // namespace goalpath

#endif  // GOALPATH__EVALUATION_HPP_
