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

#include "goalpath/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace goalpath
{

namespace
{

namespace fs = std::filesystem;

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_uint(const std::string & s, std::uint64_t & out)
{
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(const std::string & s, double & out)
{
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  in >> out;
  return !in.fail() && in.eof() && std::isfinite(out);
}

std::string resolve(const std::string & base, const std::string & path)
{
  const fs::path p(path);
  return p.is_absolute() ? p.string() : (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

tensor::AdamConfig RunConfig::adam() const
{
  tensor::AdamConfig c;
  c.learning_rate = learning_rate;
  return c;
}

double learning_rate_at(const RunConfig & config, std::size_t epoch)
{
  if (!config.final_learning_rate || config.epochs <= 1) return config.learning_rate;
  const double progress =
    static_cast<double>(std::min(epoch, config.epochs) - 1) / static_cast<double>(config.epochs - 1);
  const double lo = *config.final_learning_rate;
  return lo + 0.5 * (config.learning_rate - lo) * (1.0 + std::cos(std::numbers::pi * progress));
}

RunConfig parse_run_config(std::string_view text, const std::string & base_dir)
{
  static const std::set<std::string> kKeys{
    "temporal_modes", "history_hidden", "state_hidden", "cnn_channels", "graph_hidden", "cross_weight",
    "regression_weight", "learning_rate", "final_learning_rate", "epochs", "batch_size", "seed", "data", "checkpoint", "loss_csv",
    "resume"};

  RunConfig cfg;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) {
      problems.push_back(where + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) {
      problems.push_back(where + ": unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      problems.push_back(where + ": duplicate key '" + key + "'");
      continue;
    }

    auto positive_size = [&](std::size_t & out) {
      std::uint64_t v = 0;
      if (!parse_uint(value, v) || v == 0) {
        problems.push_back(key + " must be a positive integer, got '" + value + "'");
      } else {
        out = static_cast<std::size_t>(v);
      }
    };
    auto real = [&](double & out) {
      if (!parse_double(value, out)) problems.push_back(key + " must be a number, got '" + value + "'");
    };

    if (key == "temporal_modes") {
      positive_size(cfg.model.temporal_modes);
    } else if (key == "history_hidden") {
      positive_size(cfg.model.history_hidden);
    } else if (key == "state_hidden") {
      positive_size(cfg.model.state_hidden);
    } else if (key == "graph_hidden") {
      positive_size(cfg.model.graph_hidden);
    } else if (key == "cnn_channels") {
      std::vector<std::string> parts;
      std::stringstream ss(value);
      std::string part;
      while (std::getline(ss, part, ',')) parts.push_back(trim(part));
      std::uint64_t v = 0;
      bool ok = parts.size() == 3;
      for (std::size_t i = 0; ok && i < 3; ++i) {
        ok = parse_uint(parts[i], v) && v > 0;
        if (ok) cfg.model.cnn_channels[i] = v;
      }
      if (!ok) problems.push_back("cnn_channels must be three positive integers, got '" + value + "'");
    } else if (key == "cross_weight") {
      real(cfg.loss.cross_weight);
    } else if (key == "regression_weight") {
      real(cfg.loss.regression_weight);
    } else if (key == "learning_rate") {
      real(cfg.learning_rate);
    } else if (key == "final_learning_rate") {
      double v = 0.0;
      real(v);
      cfg.final_learning_rate = v;
    } else if (key == "epochs") {
      positive_size(cfg.epochs);
    } else if (key == "batch_size") {
      positive_size(cfg.batch_size);
    } else if (key == "seed") {
      if (!parse_uint(value, cfg.seed)) problems.push_back("seed must be a non-negative integer, got '" + value + "'");
    } else if (key == "data") {
      cfg.data = resolve(base_dir, value);
    } else if (key == "checkpoint") {
      cfg.checkpoint = resolve(base_dir, value);
    } else if (key == "loss_csv") {
      cfg.loss_csv = resolve(base_dir, value);
    } else if (key == "resume") {
      if (value == "true") {
        cfg.resume = true;
      } else if (value == "false") {
        cfg.resume = false;
      } else {
        problems.push_back("resume must be true or false, got '" + value + "'");
      }
    }
  }

  if (seen.count("cross_weight") && !(cfg.loss.cross_weight > 1.0)) {
    problems.push_back("cross_weight must be greater than 1");
  }
  if (seen.count("regression_weight") && !(cfg.loss.regression_weight > 0.0)) {
    problems.push_back("regression_weight must be positive");
  }
  if (seen.count("learning_rate") && !(cfg.learning_rate > 0.0)) {
    problems.push_back("learning_rate must be positive");
  }
  if (cfg.final_learning_rate && !(*cfg.final_learning_rate > 0.0)) {
    problems.push_back("final_learning_rate must be positive");
  }
  if (cfg.data.empty()) {
    problems.push_back("data is required");
  } else if (!fs::is_regular_file(cfg.data)) {
    problems.push_back("data file '" + cfg.data + "' does not exist");
  }
  if (cfg.checkpoint.empty()) {
    problems.push_back("checkpoint is required");
  }
  for (const std::string * out : {&cfg.checkpoint, &cfg.loss_csv}) {
    if (out->empty()) continue;
    const fs::path parent = fs::path(*out).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
      problems.push_back("directory '" + parent.string() + "' does not exist");
    }
  }
  cfg.model.seed = cfg.seed;

  if (!problems.empty()) {
    std::string msg = "invalid config: ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw usage_error(msg);
  }
  return cfg;
}

RunConfig load_run_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  return parse_run_config(buf.str(), parent.empty() ? "." : parent.string());
}

}  // namespace goalpath
