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

#include "goalpath/training.hpp"

#include "goalpath/error.hpp"
#include "goalpath/metrics.hpp"
#include "goalpath/random.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace goalpath
{

namespace
{

std::vector<Vec2> as_points(const ModeTrajectory & values)
{
  std::vector<Vec2> out(kFutureLength);
  for (std::size_t i = 0; i < kFutureLength; ++i) out[i] = {values[2 * i], values[2 * i + 1]};
  return out;
}

void write_text(const std::string & path, const std::string & text, std::ios::openmode mode)
{
  std::ofstream out(path, std::ios::binary | mode);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw data_error("failed writing '" + path + "'");
}

}  // namespace

TrainingSample make_training_sample(const Scene & scene)
{
  const ActorState & target = scene.target();
  if (!target.future) throw data_error("target actor has no future");
  const auto goals = propose_goal_paths(scene.map, target.centroid);
  const CartesianTrajectory future = target.future_trajectory();

  TrainingSample s;
  s.scene_seed = scene.seed;
  s.input = build_model_input(target, scene.actors, scene.map, goals);
  s.spatial = label_spatial(goals, future);
  for (const GoalPath & g : goals) {
    const PathFrameTrajectory p = project(g.path, future);
    ModeTrajectory f{};
    for (std::size_t i = 0; i < kFutureLength; ++i) {
      f[2 * i] = p.waypoints[i].along;
      f[2 * i + 1] = p.waypoints[i].cross;
    }
    s.frames.push_back(f);
  }
  const Pose2 pose = target.pose();
  ModeTrajectory local{};
  for (std::size_t i = 0; i < kFutureLength; ++i) {
    const Vec2 q = pose.to_local((*target.future)[i]);
    local[2 * i] = q.x;
    local[2 * i + 1] = q.y;
  }
  s.frames.push_back(local);
  return s;
}

std::vector<TrainingSample> make_training_samples(const std::vector<Scene> & scenes, Split split)
{
  std::vector<TrainingSample> out;
  for (const Scene & scene : scenes) {
    if (split_of(scene.seed) != split || !train_filter(scene.target())) continue;
    out.push_back(make_training_sample(scene));
  }
  return out;
}

StepTarget make_step_target(const TrainingSample & sample, const ModelOutput & output)
{
  const std::size_t n = output.num_goals;
  const std::size_t m = output.num_temporal;
  if (sample.frames.size() != n + 1) throw data_error("sample and model output disagree on goal count");
  const tensor::Array & traj = output.trajectories.value();

  StepTarget st;
  st.ground_truth.assign((n + 1) * m, std::nullopt);
  std::vector<std::optional<std::size_t>> temporal(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    if (sample.spatial.spatial_prob(j) <= 0.0) continue;
    std::vector<std::vector<Vec2>> predicted(m, std::vector<Vec2>(kFutureLength));
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t i = 0; i < kFutureLength; ++i) {
        predicted[t][i] = {traj.at(j * m + t, 2 * i), traj.at(j * m + t, 2 * i + 1)};
      }
      st.ground_truth[j * m + t] = sample.frames[j];
    }
    temporal[j] = label_temporal(predicted, as_points(sample.frames[j]));
  }
  st.target = build_mode_target(sample.spatial, temporal, m);
  return st;
}

LossBreakdown train_step(
  const GoalGraphModel & model, tensor::Adam & optimizer, std::span<const TrainingSample * const> batch,
  const LossConfig & loss)
{
  std::vector<ModelOutput> outputs;
  std::vector<StepTarget> targets;
  outputs.reserve(batch.size());
  targets.reserve(batch.size());
  for (const TrainingSample * s : batch) {
    outputs.push_back(model.forward(s->input));
    targets.push_back(make_step_target(*s, outputs.back()));
  }
  std::vector<LossTerm> terms;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    terms.push_back({&targets[i].target, targets[i].ground_truth, &outputs[i]});
  }
  TotalLoss total = total_loss(terms, loss);
  if (!std::isfinite(total.breakdown.total)) throw numeric_error("non-finite training loss");
  total.value.backward();
  optimizer.step();
  return total.breakdown;
}

EpochLoss train_epoch(
  const GoalGraphModel & model, tensor::Adam & optimizer, const std::vector<TrainingSample> & samples,
  const RunConfig & config, std::size_t epoch)
{
  if (samples.empty()) throw data_error("no training samples");
  optimizer.set_learning_rate(learning_rate_at(config, epoch));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, 0x747261696e000000ULL + epoch));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  EpochLoss sums;
  sums.epoch = epoch;
  std::vector<const TrainingSample *> batch;
  for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
    batch.clear();
    for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
      batch.push_back(&samples[order[i]]);
    }
    const LossBreakdown b = train_step(model, optimizer, batch, config.loss);
    sums.cls += b.cls;
    sums.reg += b.reg;
    sums.total += b.total;
  }
  const double n = static_cast<double>(samples.size());
  sums.cls /= n;
  sums.reg /= n;
  sums.total /= n;
  return sums;
}

nlohmann::json checkpoint_to_json(const GoalGraphModel & model, const tensor::Adam & optimizer, std::size_t epoch)
{
  nlohmann::json j;
  j["format"] = "goalpath-checkpoint";
  j["version"] = kCheckpointVersion;
  j["epoch"] = epoch;
  j["model"] = model.config().to_json();
  j["params"] = model.parameters().to_json();
  j["optimizer"] = optimizer.to_json();
  return j;
}

void save_checkpoint(
  const std::string & path, const GoalGraphModel & model, const tensor::Adam & optimizer, std::size_t epoch)
{
  // Write-then-rename so an interrupted run never leaves a torn checkpoint.
  const std::string tmp = path + ".tmp";
  write_text(tmp, checkpoint_to_json(model, optimizer, epoch).dump() + "\n", std::ios::trunc);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw data_error("cannot move checkpoint into place at '" + path + "': " + ec.message());
}

Checkpoint load_checkpoint(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open checkpoint '" + path + "'");
  Checkpoint c;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "goalpath-checkpoint") throw data_error("'" + path + "' is not a checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw data_error("unsupported checkpoint version " + j.at("version").dump());
    }
    c.model = ModelConfig::from_json(j.at("model"));
    c.epoch = j.at("epoch").get<std::size_t>();
    c.params = j.at("params");
    c.optimizer = j.at("optimizer");
  } catch (const nlohmann::json::exception & e) {
    throw data_error("checkpoint '" + path + "': " + e.what());
  }
  return c;
}

GoalGraphModel model_from_checkpoint(const Checkpoint & checkpoint, const ModelConfig * expected)
{
  if (expected) {
    nlohmann::json a = expected->to_json();
    nlohmann::json b = checkpoint.model.to_json();
    a.erase("seed");
    b.erase("seed");
    if (a != b) {
      throw data_error("checkpoint architecture " + b.dump() + " does not match config " + a.dump());
    }
  }
  GoalGraphModel model(checkpoint.model);
  model.parameters().load_json(checkpoint.params);
  return model;
}

std::vector<EpochLoss> run_training(const RunConfig & config, const EpochCallback & on_epoch)
{
  const std::vector<TrainingSample> samples = make_training_samples(read_dataset(config.data), Split::kTrain);
  if (samples.empty()) throw data_error("dataset '" + config.data + "' has no usable training samples");

  std::size_t first_epoch = 1;
  std::optional<GoalGraphModel> model;
  std::optional<tensor::Adam> optimizer;
  if (config.resume && std::filesystem::exists(config.checkpoint)) {
    const Checkpoint c = load_checkpoint(config.checkpoint);
    model.emplace(model_from_checkpoint(c, &config.model));
    optimizer.emplace(model->parameters(), config.adam());
    optimizer->load_json(c.optimizer);
    first_epoch = c.epoch + 1;
  } else {
    model.emplace(config.model);
    optimizer.emplace(model->parameters(), config.adam());
    if (!config.loss_csv.empty()) write_text(config.loss_csv, "epoch,cls,reg,total\n", std::ios::trunc);
  }

  std::vector<EpochLoss> history;
  for (std::size_t epoch = first_epoch; epoch <= config.epochs; ++epoch) {
    const EpochLoss e = train_epoch(*model, *optimizer, samples, config, epoch);
    history.push_back(e);
    save_checkpoint(config.checkpoint, *model, *optimizer, epoch);
    if (!config.loss_csv.empty()) {
      char row[160];
      std::snprintf(row, sizeof(row), "%zu,%.9g,%.9g,%.9g\n", e.epoch, e.cls, e.reg, e.total);
      write_text(config.loss_csv, row, std::ios::app);
    }
    if (on_epoch) on_epoch(e);
  }
  return history;
}

}  // namespace goalpath
