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

#ifndef GOALPATH__CONFIG_HPP_
#define GOALPATH__CONFIG_HPP_

#include "goalpath/loss.hpp"
#include "goalpath/model.hpp"
#include "goalpath/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace goalpath
{

/// Settings for train and eval. Read from a `key = value` file; `#` starts a
/// comment. Relative paths resolve against the config file's directory.
struct RunConfig
{
  ModelConfig model;
  LossConfig loss;
  double learning_rate{1e-3};
  // When set, the rate follows a half cosine from learning_rate at the first
  // epoch down to this value at the last one.
  std::optional<double> final_learning_rate;
  std::size_t epochs{10};
  std::size_t batch_size{16};
  std::uint64_t seed{0};
  std::string data;
  std::string checkpoint;
  std::string loss_csv;
  bool resume{false};

  tensor::AdamConfig adam() const;
};

// Learning rate for a 1-based epoch.
double learning_rate_at(const RunConfig & config, std::size_t epoch);

// Parses and validates everything before returning. Every problem found is
// reported in one Error(kUsage), separated by "; ".
RunConfig parse_run_config(std::string_view text, const std::string & base_dir = ".");
RunConfig load_run_config(const std::string & path);

}  // namespace goalpath

#endif  // GOALPATH__CONFIG_HPP_
