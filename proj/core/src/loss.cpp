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

#include "goalpath/loss.hpp"

#include "goalpath/error.hpp"

#include <string>

namespace goalpath
{

using tensor::Array;
using tensor::Var;

tensor::Var classification_loss(const ModeTarget & target, const tensor::Var & joint_probs)
{
  if (joint_probs.value().size() != target.joint_probs.size()) {
    throw data_error(
      "classification_loss: target has " + std::to_string(target.joint_probs.size()) + " modes, prediction has " +
      std::to_string(joint_probs.value().size()));
  }
  return tensor::weighted_nll(joint_probs, Array(joint_probs.shape(), target.joint_probs));
}

double classification_loss(const ModeTarget & target, std::span<const double> joint_probs)
{
  const Var probs(Array({joint_probs.size()}, std::vector<double>(joint_probs.begin(), joint_probs.end())));
  return classification_loss(target, probs).value()[0];
}

tensor::Var regression_loss(
  const ModeTarget & target, std::span<const std::optional<ModeTrajectory>> ground_truth,
  const tensor::Var & trajectories, double cross_weight)
{
  const std::size_t k_modes = target.joint_probs.size();
  if (trajectories.shape() != tensor::Shape{k_modes, kTrajectoryValues} || ground_truth.size() != k_modes) {
    throw data_error("regression_loss: expected " + std::to_string(k_modes) + " modes");
  }
  Array gt({k_modes, kTrajectoryValues});
  Array weights({k_modes, kTrajectoryValues});
  for (std::size_t k = 0; k < k_modes; ++k) {
    const double p = target.joint_probs[k];
    if (p == 0.0) {
      continue;
    }
    if (!ground_truth[k]) {
      throw data_error("regression_loss: missing ground truth for supported mode " + std::to_string(k));
    }
    for (std::size_t c = 0; c < kTrajectoryValues; ++c) {
      gt.at(k, c) = (*ground_truth[k])[c];
      weights.at(k, c) = c % 2 == 0 ? p : p * cross_weight;
    }
  }
  return tensor::l1_loss(trajectories, gt, weights);
}

TotalLoss total_loss(std::span<const LossTerm> batch, const LossConfig & config)
{
  if (batch.empty()) {
    throw data_error("total_loss: empty batch");
  }
  TotalLoss out;
  std::vector<Var> terms;
  for (const auto & term : batch) {
    const Var cls = classification_loss(*term.target, term.output->joint_probs);
    const Var reg = regression_loss(*term.target, term.ground_truth, term.output->trajectories, config.cross_weight);
    out.breakdown.per_actor_cls.push_back(cls.value()[0]);
    out.breakdown.per_actor_reg.push_back(reg.value()[0]);
    out.breakdown.cls += cls.value()[0];
    out.breakdown.reg += reg.value()[0];
    terms.push_back(tensor::add(cls, tensor::scale(reg, config.regression_weight)));
  }
  out.breakdown.total = out.breakdown.cls + config.regression_weight * out.breakdown.reg;
  out.value = tensor::sum(tensor::concat_rows(
    [&] {
      std::vector<Var> rows;
      for (const auto & t : terms) rows.push_back(tensor::reshape(t, {1, 1}));
      return rows;
    }()));
  return out;
}

}  // namespace goalpath
