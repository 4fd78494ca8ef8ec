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
#include "goalpath/lane_map.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace goalpath
{
namespace
{

namespace fs = std::filesystem;

struct CliResult
{
  int code{-1};
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto * info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("goalpath_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string & name) const { return (dir_ / name).string(); }

  CliResult run(const std::string & args) const
  {
    const std::string err_path = path("stderr.txt");
    const std::string cmd = "GOALPATH_LOG=warn " GOALPATH_CLI " " + args + " 2>" + err_path;
    CliResult r;
    FILE * pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = oracle::read_file(err_path);
    return r;
  }

  void write_config(const std::string & data, std::size_t epochs, const std::string & extra = "") const
  {
    std::ofstream(path("run.cfg")) << "history_hidden = 8\nstate_hidden = 8\ncnn_channels = 4, 4, 4\n"
                                      "graph_hidden = 8\nbatch_size = 4\nseed = 3\n"
                                   << "data = " << data << "\ncheckpoint = ck.json\nloss_csv = loss.csv\n"
                                   << "epochs = " << epochs << "\n"
                                   << extra;
  }

  fs::path dir_;
};

std::size_t count_of(const std::string & text, const std::string & needle)
{
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

void expect_single_error_line(const CliResult & r)
{
  EXPECT_EQ(count_of(r.err, "error: "), 1u) << r.err;
  EXPECT_EQ(count_of(r.err, "\n"), 1u) << r.err;
}

TEST_F(CliTest, GenDataWritesRequestedScenes)
{
  const auto r = run("gen-data --kind n_way3 --count 10 --out " + path("d.jsonl") + " --seed 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = oracle::read_file(path("d.jsonl"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
  EXPECT_EQ(r.out, "n_way3 10\n");
}

TEST_F(CliTest, GenDataIsDeterministic)
{
  ASSERT_EQ(run("gen-data --kind mixed --count 30 --out " + path("a.jsonl") + " --seed 8").code, 0);
  ASSERT_EQ(run("gen-data --kind mixed --count 30 --out " + path("b.jsonl") + " --seed 8").code, 0);
  ASSERT_EQ(run("gen-data --kind mixed --count 30 --out " + path("c.jsonl") + " --seed 9").code, 0);
  EXPECT_EQ(oracle::read_file(path("a.jsonl")), oracle::read_file(path("b.jsonl")));
  EXPECT_NE(oracle::read_file(path("a.jsonl")), oracle::read_file(path("c.jsonl")));
}

TEST_F(CliTest, MixedReportsPerKindCounts)
{
  const auto r = run("gen-data --kind mixed --count 200 --out " + path("d.jsonl"));
  ASSERT_EQ(r.code, 0);
  std::size_t total = 0;
  for (const char * kind : {"straight", "curved", "n_way3", "n_way4", "n_way5"}) {
    const auto pos = r.out.find(std::string(kind) + " ");
    ASSERT_NE(pos, std::string::npos) << r.out;
    total += std::stoul(r.out.substr(pos + std::string(kind).size() + 1));
  }
  EXPECT_EQ(total, 200u);
}

TEST_F(CliTest, UsageAndDataErrors)
{
  auto r = run("gen-data --kind hexagon --count 3 --out " + path("d.jsonl"));
  EXPECT_EQ(r.code, 1);
  expect_single_error_line(r);

  r = run("gen-data --kind straight --count 3 --out /nonexistent/dir/d.jsonl");
  EXPECT_EQ(r.code, 2);
  expect_single_error_line(r);

  r = run("frobnicate");
  EXPECT_EQ(r.code, 1);

  r = run("train --config " + path("missing.cfg"));
  EXPECT_EQ(r.code, 1);
  expect_single_error_line(r);

  r = run("predict --scene " + path("missing.jsonl") + " --checkpoint " + path("ck.json"));
  EXPECT_EQ(r.code, 2);
  expect_single_error_line(r);
}

TEST_F(CliTest, ConfigProblemsListedTogether)
{
  std::ofstream(path("run.cfg")) << "epochs = zero\ncolour = blue\n";
  const auto r = run("train --config " + path("run.cfg"));
  EXPECT_EQ(r.code, 1);
  expect_single_error_line(r);
  EXPECT_NE(r.err.find("epochs"), std::string::npos);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_NE(r.err.find("data is required"), std::string::npos);
}

TEST_F(CliTest, TrainEvalPredictPipeline)
{
  ASSERT_EQ(run("gen-data --kind mixed --count 40 --out " + path("d.jsonl") + " --seed 1").code, 0);
  write_config("d.jsonl", 1);
  auto r = run("train --config " + path("run.cfg"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ck = oracle::read_file(path("ck.json"));
  ASSERT_FALSE(ck.empty());
  const auto csv = oracle::read_file(path("loss.csv"));
  EXPECT_EQ(count_of(csv, "\n"), 2u);

  r = run("train --config " + path("run.cfg"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(oracle::read_file(path("ck.json")), ck);

  r = run("eval --config " + path("run.cfg") + " --split all --report " + path("rep.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("turning"), std::string::npos);
  const auto report = nlohmann::json::parse(oracle::read_file(path("rep.json")));
  EXPECT_TRUE(report.at("model").contains("all"));
  EXPECT_TRUE(report.at("model").contains("turning"));
  EXPECT_TRUE(report.contains("kinematic_baseline"));
  const auto again = run("eval --config " + path("run.cfg") + " --split all --report " + path("rep2.json"));
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(oracle::read_file(path("rep2.json")), oracle::read_file(path("rep.json")));

  r = run("eval --config " + path("run.cfg") + " --split sideways");
  EXPECT_EQ(r.code, 1);

  r = run("predict --scene " + path("d.jsonl") + " --index 0 --checkpoint " + path("ck.json") + " --svg " +
          path("p.svg"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto svg = oracle::read_file(path("p.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  run("predict --scene " + path("d.jsonl") + " --index 0 --checkpoint " + path("ck.json") + " --svg " +
      path("q.svg"));
  EXPECT_EQ(oracle::read_file(path("q.svg")), svg);

  r = run("predict --scene " + path("d.jsonl") + " --index 400 --checkpoint " + path("ck.json"));
  EXPECT_EQ(r.code, 2);
  expect_single_error_line(r);
}

TEST_F(CliTest, CheckpointShapeMismatch)
{
  ASSERT_EQ(run("gen-data --kind straight --count 20 --out " + path("d.jsonl")).code, 0);
  write_config("d.jsonl", 1);
  ASSERT_EQ(run("train --config " + path("run.cfg")).code, 0);
  std::ofstream(path("other.cfg")) << "graph_hidden = 12\ndata = d.jsonl\ncheckpoint = ck.json\n";
  const auto r = run("eval --config " + path("other.cfg"));
  EXPECT_EQ(r.code, 2);
  expect_single_error_line(r);
}

TEST_F(CliTest, SvgGoalPathCountMatchesProposal)
{
  ASSERT_EQ(run("gen-data --kind straight --count 5 --out " + path("s.jsonl")).code, 0);
  ASSERT_EQ(run("gen-data --kind n_way5 --count 5 --out " + path("n.jsonl")).code, 0);
  write_config("s.jsonl", 1);
  ASSERT_EQ(run("train --config " + path("run.cfg")).code, 0);

  for (const char * file : {"s.jsonl", "n.jsonl"}) {
    const auto scenes = read_dataset(path(file));
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      const auto r = run("predict --scene " + path(file) + " --index " + std::to_string(i) + " --checkpoint " +
                         path("ck.json") + " --svg " + path("p.svg"));
      ASSERT_EQ(r.code, 0) << r.err;
      const auto expected = propose_goal_paths(scenes[i].map, scenes[i].target().centroid).size();
      EXPECT_EQ(count_of(oracle::read_file(path("p.svg")), "class=\"goal-path\""), expected) << file << " " << i;
      if (std::string(file) == "s.jsonl" && scenes[i].behavior != "off_map") {
        EXPECT_EQ(expected, 1u);
      }
    }
  }
}

}  // namespace
}  // namespace goalpath
