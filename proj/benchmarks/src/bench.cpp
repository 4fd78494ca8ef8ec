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


#include "goalpath/dataio.hpp"
#include "goalpath/features.hpp"
#include "goalpath/frenet.hpp"
#include "goalpath/lane_map.hpp"
#include "goalpath/model.hpp"
#include "goalpath/random.hpp"
#include "goalpath/training.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace
{

using namespace goalpath;

ReferencePath arc_path(double radius)
{
  std::vector<Vec2> pts;
  for (int i = 0; i <= 200; ++i) {
    const double a = 0.4 * i / 200.0 * 3.14159265358979;
    pts.push_back({radius * std::sin(a), radius * (1.0 - std::cos(a))});
  }
  return resample_polyline(pts, 1.0);
}

void BM_ClosestPoint(benchmark::State & state)
{
  const ReferencePath path = arc_path(40.0);
  Rng rng(7);
  std::vector<Vec2> queries;
  for (int i = 0; i < 256; ++i) queries.push_back({rng.uniform(-5.0, 40.0), rng.uniform(-5.0, 30.0)});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closest_point_on_path(path, queries[i++ & 255]));
  }
}
BENCHMARK(BM_ClosestPoint);

void BM_Resample(benchmark::State & state)
{
  std::vector<Vec2> pts;
  for (int i = 0; i <= 400; ++i) pts.push_back({0.25 * i, std::sin(0.01 * i)});
  for (auto _ : state) benchmark::DoNotOptimize(resample_polyline(pts, 1.0));
}
BENCHMARK(BM_Resample);

void BM_ProposeGoals(benchmark::State & state)
{
  const Scene scene = gen_scene("n_way" + std::to_string(state.range(0)), 11);
  const Vec2 c = scene.target().centroid;
  for (auto _ : state) benchmark::DoNotOptimize(propose_goal_paths(scene.map, c));
}
BENCHMARK(BM_ProposeGoals)->Arg(3)->Arg(4)->Arg(5);

void BM_BuildInput(benchmark::State & state)
{
  const Scene scene = gen_scene("n_way4", 3);
  const ActorState & t = scene.target();
  const auto goals = propose_goal_paths(scene.map, t.centroid);
  for (auto _ : state) benchmark::DoNotOptimize(build_model_input(t, scene.actors, scene.map, goals));
}
BENCHMARK(BM_BuildInput);

void BM_Forward(benchmark::State & state)
{
  // First scene whose target still has every branch ahead of it.
  const std::size_t want = static_cast<std::size_t>(state.range(0)) - 1;
  Scene scene;
  std::vector<GoalPath> goals;
  for (std::uint64_t seed = 0; goals.size() < want; ++seed) {
    scene = gen_scene("n_way" + std::to_string(state.range(0)), seed);
    goals = propose_goal_paths(scene.map, scene.target().centroid);
  }
  const ActorState & t = scene.target();
  const ModelInput input = build_model_input(t, scene.actors, scene.map, goals);
  const GoalGraphModel model(ModelConfig{});
  state.counters["goals"] = static_cast<double>(goals.size());
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(input));
}
BENCHMARK(BM_Forward)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_TrainStep(benchmark::State & state)
{
  std::vector<Scene> scenes;
  for (std::uint64_t s = 0; scenes.size() < 16; ++s) {
    if (split_of(s) == Split::kTrain) scenes.push_back(gen_scene("mixed", s));
  }
  const auto samples = make_training_samples(scenes, Split::kTrain);
  std::vector<const TrainingSample *> batch;
  for (const auto & s : samples) batch.push_back(&s);
  GoalGraphModel model(ModelConfig{});
  tensor::Adam adam(model.parameters(), tensor::AdamConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(train_step(model, adam, batch, LossConfig{}));
  state.counters["batch"] = static_cast<double>(batch.size());
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
