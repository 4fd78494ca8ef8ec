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

#include "goalpath/config.hpp"
#include "goalpath/dataio.hpp"
#include "goalpath/error.hpp"
#include "goalpath/evaluation.hpp"
#include "goalpath/model.hpp"
#include "goalpath/random.hpp"
#include "goalpath/svg.hpp"
#include "goalpath/training.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace
{

using namespace goalpath;

void setup_logging()
{
  auto logger = spdlog::stderr_logger_st("goalpath");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char * env = std::getenv("GOALPATH_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

void write_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw data_error("failed writing '" + path + "'");
}

int gen_data(const std::string & kind, std::size_t count, const std::string & out, std::uint64_t seed)
{
  if (!is_scene_kind(kind)) throw usage_error("unknown kind '" + kind + "'");
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw data_error("cannot open '" + out + "' for writing");
  std::map<std::string, std::size_t> per_kind;
  for (std::size_t i = 0; i < count; ++i) {
    const Scene scene = gen_scene(kind, derive_seed(seed, i));
    ++per_kind[scene.kind];
    file << scene_to_json(scene).dump() << '\n';
  }
  file.flush();
  if (!file) throw data_error("failed writing '" + out + "'");
  for (const auto & [name, n] : per_kind) std::cout << name << ' ' << n << '\n';
  spdlog::info("wrote {} scenes to {}", count, out);
  return 0;
}

int train(const std::string & config_path)
{
  const RunConfig cfg = load_run_config(config_path);
  spdlog::info("training on {} for {} epochs", cfg.data, cfg.epochs);
  const auto history = run_training(cfg, [](const EpochLoss & e) {
    spdlog::info("epoch {} cls {:.6f} reg {:.6f} total {:.6f}", e.epoch, e.cls, e.reg, e.total);
  });
  if (history.empty()) {
    std::cout << "checkpoint already at epoch " << cfg.epochs << '\n';
  } else {
    std::cout << "epoch " << history.back().epoch << " total " << history.back().total << '\n';
  }
  return 0;
}

int eval(
  const std::string & config_path, const std::string & checkpoint_path, const std::string & split_name,
  const std::string & report_path)
{
  const RunConfig cfg = load_run_config(config_path);
  std::optional<Split> split;
  if (split_name != "all") {
    split = split_from_string(split_name);
    if (!split) throw usage_error("unknown split '" + split_name + "'");
  }
  const GoalGraphModel model =
    model_from_checkpoint(load_checkpoint(checkpoint_path.empty() ? cfg.checkpoint : checkpoint_path), &cfg.model);
  const EvaluationResult result = evaluate(model, read_dataset(cfg.data), split);
  if (result.goal_counts.empty()) throw data_error("no samples to evaluate in split '" + split_name + "'");
  nlohmann::json report = evaluation_to_json(result);
  report["split"] = split_name;
  if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
  std::cout << evaluation_to_table(result);
  return 0;
}

int predict_scene(
  const std::string & scene_path, std::size_t index, const std::string & checkpoint_path,
  const std::string & svg_path)
{
  const std::vector<Scene> scenes = read_dataset(scene_path);
  if (index >= scenes.size()) {
    throw data_error("scene index " + std::to_string(index) + " out of range for '" + scene_path + "'");
  }
  const Scene & scene = scenes[index];
  const GoalGraphModel model = model_from_checkpoint(load_checkpoint(checkpoint_path));
  const ActorState & target = scene.target();
  const WorldPrediction wp = predict(model, target, scene.map, scene.actors);
  if (!svg_path.empty()) write_file(svg_path, render_svg(scene.map, target, wp));
  std::cout << "goals " << wp.goals.size() << " modes " << wp.trajectories.size() << '\n';
  for (std::size_t k = 0; k < wp.trajectories.size(); ++k) {
    const std::size_t spatial = k / wp.raw.num_temporal;
    const std::string name = spatial < wp.goals.size() ? wp.goals[spatial].id() : std::string("goal-free");
    std::cout << k << ' ' << name << ' ' << wp.joint_probs[k] << '\n';
  }
  return 0;
}

int exit_code(ErrorKind kind) { return static_cast<int>(kind); }

std::string one_line(std::string s)
{
  for (char & c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char ** argv)
{
  setup_logging();

  CLI::App app{"Goal-path trajectory prediction"};
  app.require_subcommand(1);

  std::string kind, out;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  auto * gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  gen->add_option("--kind", kind, "straight, curved, n_way3..n_way6, roundabout, or mixed")->required();
  gen->add_option("--count", count, "Number of scenes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "Output JSON Lines file")->required();
  gen->add_option("--seed", seed, "Base seed");

  std::string config;
  auto * tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--config", config, "Run config file")->required();

  std::string checkpoint, split = "test", report;
  auto * ev = app.add_subcommand("eval", "Evaluate a checkpoint");
  ev->add_option("--config", config, "Run config file")->required();
  ev->add_option("--checkpoint", checkpoint, "Checkpoint (defaults to the config's)");
  ev->add_option("--split", split, "train, val, test, or all");
  ev->add_option("--report", report, "Write the report as JSON");

  std::string scene, svg;
  std::size_t index = 0;
  auto * pr = app.add_subcommand("predict", "Predict one scene");
  pr->add_option("--scene", scene, "Dataset file holding the scene")->required();
  pr->add_option("--index", index, "Line of the scene in the file");
  pr->add_option("--checkpoint", checkpoint, "Checkpoint")->required();
  pr->add_option("--svg", svg, "Write an SVG rendering");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return exit_code(ErrorKind::kUsage);
  }

  try {
    if (*gen) return gen_data(kind, count, out, seed);
    if (*tr) return train(config);
    if (*ev) return eval(config, checkpoint, split, report);
    if (*pr) return predict_scene(scene, index, checkpoint, svg);
  } catch (const Error & e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return exit_code(e.kind());
  } catch (const std::exception & e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return exit_code(ErrorKind::kData);
  }
  return exit_code(ErrorKind::kUsage);
}
