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

#ifndef GOALPATH__METRICS_HPP_
#define GOALPATH__METRICS_HPP_

#include "goalpath/features.hpp"
#include "goalpath/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace goalpath
{

// Mean pointwise distance; inputs must be time-aligned and equally long.
double ade(std::span<const Vec2> pred, std::span<const Vec2> gt);
// Distance at the final waypoint.
double fde(std::span<const Vec2> pred, std::span<const Vec2> gt);

struct ModeSet
{
  std::vector<std::vector<Vec2>> trajectories;
  std::vector<double> probs;
};

// Among the k most probable modes (probability ties: lower index first), the
// index with minimal ADE (ADE ties: lower index). k >= K considers all modes.
std::size_t min_k_select(const ModeSet & modes, std::span<const Vec2> gt, std::size_t k);

double expected_ade(const ModeSet & modes, std::span<const Vec2> gt);

struct AlongCrossError
{
  std::vector<double> along;  // per horizon
  std::vector<double> cross;  // per horizon
  double mean_along{0.0};
  double mean_cross{0.0};
};

// Ground truth with less total motion than this uses the heading line.
inline constexpr double kDegenerateMotion = 0.2;
inline constexpr double kGroundTruthSpacing = 0.1;

// Errors in the path frame of the ground truth resampled at 0.1 m. When the
// ground truth barely moves, the reference is the line through
// `fallback.origin` along `fallback.heading` instead.
AlongCrossError along_cross_error(std::span<const Vec2> pred, std::span<const Vec2> gt, const Pose2 & fallback);

// Heading change between the current heading and the last future segment
// exceeds 10 degrees.
bool turning_filter(const ActorState & actor);
inline constexpr double kTurningThresholdDeg = 10.0;

// Not parked, has a full 6 s future, and is not the ego vehicle.
bool train_filter(const ActorState & actor);
// train_filter plus at least 1 m of net future displacement.
bool eval_filter(const ActorState & actor);
inline constexpr double kMinEvalDisplacement = 1.0;

struct MetricRow
{
  double ade{0.0};
  double fde{0.0};
  double aate{0.0};
  double acte{0.0};
};

// Per-sample metrics for every evaluated k.
struct SampleMetrics
{
  std::map<std::string, MetricRow> by_k;  // "min_1", "min_3", "min_5", "min_10", "min_*"
  double expected_ade{0.0};
  std::size_t num_modes{0};
};

inline const std::vector<std::pair<std::string, std::size_t>> & evaluated_ks()
{
  static const std::vector<std::pair<std::string, std::size_t>> ks{
    {"min_1", 1}, {"min_3", 3}, {"min_5", 5}, {"min_10", 10}, {"min_*", 0}};
  return ks;
}

SampleMetrics evaluate_sample(const ModeSet & modes, std::span<const Vec2> gt, const Pose2 & actor_pose);

struct SliceReport
{
  std::size_t count{0};
  std::map<std::string, MetricRow> by_k;
  double expected_ade{0.0};
};

struct EvalReport
{
  SliceReport all;
  SliceReport turning;
};

/// Sums per-sample metrics in insertion order and averages on finalize().
class ReportAccumulator
{
public:
  void add(const SampleMetrics & sample, bool turning);
  EvalReport finalize() const;

private:
  struct Sums
  {
    std::size_t count{0};
    std::map<std::string, MetricRow> by_k;
    double expected_ade{0.0};
  };
  static void accumulate(Sums & sums, const SampleMetrics & sample);
  static SliceReport average(const Sums & sums);

  Sums all_;
  Sums turning_;
};

nlohmann::json report_to_json(const EvalReport & report);
// Aligned plaintext table: one row per slice, columns per k and metric.
std::string report_to_table(const EvalReport & report);

}  // namespace goalpath

#endif  // GOALPATH__METRICS_HPP_
