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

#ifndef GOALPATH__TRAINING_HPP_
#define GOALPATH__TRAINING_HPP_

#include "goalpath/config.hpp"
#include "goalpath/dataio.hpp"
#include "goalpath/labeling.hpp"
#include "goalpath/loss.hpp"
#include "goalpath/model.hpp"
#include "goalpath/tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace goalpath
{

/// Precomputed features and spatial labels for one target actor.
struct TrainingSample
{
  std::uint64_t scene_seed{0};
  ModelInput input;
  SpatialTarget spatial;
  // Ground truth future in each spatial mode's own frame: goal paths first,
  // then the actor-centric frame.
  std::vector<ModeTrajectory> frames;
};

TrainingSample make_training_sample(const Scene & scene);

// Scenes of the given split whose target passes the training filter.
std::vector<TrainingSample> make_training_samples(const std::vector<Scene> & scenes, Split split);

/// Per-step supervision: the temporal label of each supported spatial mode is
/// the closest predicted temporal mode in that mode's frame.
struct StepTarget
{
  ModeTarget target;
  std::vector<std::optional<ModeTrajectory>> ground_truth;
};

StepTarget make_step_target(const TrainingSample & sample, const ModelOutput & output);

struct EpochLoss
{
  std::size_t epoch{0};
  // Means over the epoch's samples.
  double cls{0.0};
  double reg{0.0};
  double total{0.0};
};

// One optimizer step over `batch`; returns the summed loss breakdown.
LossBreakdown train_step(
  const GoalGraphModel & model, tensor::Adam & optimizer, std::span<const TrainingSample * const> batch,
  const LossConfig & loss);

// Sets the epoch's learning rate, shuffles with a generator derived from
// (seed, epoch), and runs every batch.
EpochLoss train_epoch(
  const GoalGraphModel & model, tensor::Adam & optimizer, const std::vector<TrainingSample> & samples,
  const RunConfig & config, std::size_t epoch);

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint
{
  ModelConfig model;
  std::size_t epoch{0};
  nlohmann::json params;
  nlohmann::json optimizer;
};

nlohmann::json checkpoint_to_json(
  const GoalGraphModel & model, const tensor::Adam & optimizer, std::size_t epoch);
void save_checkpoint(
  const std::string & path, const GoalGraphModel & model, const tensor::Adam & optimizer, std::size_t epoch);
Checkpoint load_checkpoint(const std::string & path);

// Rebuilds the model; throws Error(kData) when `expected` is given and its
// architecture differs from the checkpoint's.
GoalGraphModel model_from_checkpoint(const Checkpoint & checkpoint, const ModelConfig * expected = nullptr);

using EpochCallback = std::function<void(const EpochLoss &)>;

// Reads the dataset, trains on its train split, and writes the checkpoint
// and loss CSV after every epoch. With `resume` and an existing checkpoint,
// continues after the stored epoch.
std::vector<EpochLoss> run_training(const RunConfig & config, const EpochCallback & on_epoch = {});

}  // namespace goalpath

#endif  // GOALPATH__TRAINING_HPP_
