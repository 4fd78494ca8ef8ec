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

#include "goalpath/metrics.hpp"

#include "goalpath/error.hpp"
#include "goalpath/frenet.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace goalpath
{

namespace
{

void check_lengths(std::span<const Vec2> pred, std::span<const Vec2> gt)
{
  if (pred.size() != gt.size() || gt.empty()) {
    throw data_error(
      "trajectory length mismatch: prediction " + std::to_string(pred.size()) + ", ground truth " +
      std::to_string(gt.size()));
  }
}

}  // namespace

double ade(std::span<const Vec2> pred, std::span<const Vec2> gt)
{
  check_lengths(pred, gt);
  return mean_distance(pred, gt);
}

double fde(std::span<const Vec2> pred, std::span<const Vec2> gt)
{
  check_lengths(pred, gt);
  return distance(pred.back(), gt.back());
}

std::size_t min_k_select(const ModeSet & modes, std::span<const Vec2> gt, std::size_t k)
{
  const std::size_t count = modes.trajectories.size();
  if (count == 0 || modes.probs.size() != count) {
    throw data_error("min_k_select: empty or inconsistent mode set");
  }
  if (k == 0) {
    throw data_error("min_k_select: k must be at least 1");
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return modes.probs[a] > modes.probs[b];
  });
  order.resize(std::min(k, count));
  std::size_t best = order.front();
  double best_ade = std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    const double e = ade(modes.trajectories[idx], gt);
    if (e < best_ade || (e == best_ade && idx < best)) {
      best_ade = e;
      best = idx;
    }
  }
  return best;
}

double expected_ade(const ModeSet & modes, std::span<const Vec2> gt)
{
  double total = 0.0;
  for (std::size_t k = 0; k < modes.trajectories.size(); ++k) {
    total += modes.probs[k] * ade(modes.trajectories[k], gt);
  }
  return total;
}

AlongCrossError along_cross_error(std::span<const Vec2> pred, std::span<const Vec2> gt, const Pose2 & fallback)
{
  check_lengths(pred, gt);
  double motion = 0.0;
  for (std::size_t i = 1; i < gt.size(); ++i) motion += distance(gt[i - 1], gt[i]);

  ReferencePath reference;
  if (motion < kDegenerateMotion) {
    // A line long enough that nothing projects past its end.
    const Vec2 dir = unit_from_heading(fallback.heading);
    const Vec2 start = fallback.origin - dir * 100.0;
    reference = ReferencePath({start, fallback.origin + dir * 100.0});
  } else {
    reference = resample_polyline(gt, kGroundTruthSpacing);
  }

  AlongCrossError out;
  out.along.resize(gt.size());
  out.cross.resize(gt.size());
  for (std::size_t t = 0; t < gt.size(); ++t) {
    const PathProjection p = closest_point_on_path(reference, pred[t]);
    const PathProjection g = closest_point_on_path(reference, gt[t]);
    out.along[t] = std::abs(p.along - g.along);
    out.cross[t] = std::abs(p.cross);
  }
  const double n = static_cast<double>(gt.size());
  out.mean_along = std::accumulate(out.along.begin(), out.along.end(), 0.0) / n;
  out.mean_cross = std::accumulate(out.cross.begin(), out.cross.end(), 0.0) / n;
  return out;
}

bool turning_filter(const ActorState & actor)
{
  if (!actor.future || actor.future->size() < 2) {
    return false;
  }
  const auto & f = *actor.future;
  // Last non-degenerate future segment.
  for (std::size_t i = f.size() - 1; i >= 1; --i) {
    const Vec2 d = f[i] - f[i - 1];
    if (d.norm() > 1e-6) {
      const double change = wrap_angle(std::atan2(d.y, d.x) - actor.heading);
      return std::abs(change) * 180.0 / std::numbers::pi > kTurningThresholdDeg;
    }
  }
  return false;
}

bool train_filter(const ActorState & actor)
{
  return !actor.is_parked && actor.future && actor.future->size() == kFutureLength && actor.id != "ego";
}

bool eval_filter(const ActorState & actor)
{
  return train_filter(actor) && distance(actor.future->back(), actor.centroid) >= kMinEvalDisplacement;
}

SampleMetrics evaluate_sample(const ModeSet & modes, std::span<const Vec2> gt, const Pose2 & actor_pose)
{
  SampleMetrics s;
  s.num_modes = modes.trajectories.size();
  for (const auto & [name, k] : evaluated_ks()) {
    const std::size_t idx = min_k_select(modes, gt, k == 0 ? s.num_modes : k);
    const auto & traj = modes.trajectories[idx];
    const AlongCrossError ac = along_cross_error(traj, gt, actor_pose);
    s.by_k[name] = {ade(traj, gt), fde(traj, gt), ac.mean_along, ac.mean_cross};
  }
  s.expected_ade = expected_ade(modes, gt);
  return s;
}

void ReportAccumulator::accumulate(Sums & sums, const SampleMetrics & sample)
{
  ++sums.count;
  for (const auto & [name, row] : sample.by_k) {
    MetricRow & acc = sums.by_k[name];
    acc.ade += row.ade;
    acc.fde += row.fde;
    acc.aate += row.aate;
    acc.acte += row.acte;
  }
  sums.expected_ade += sample.expected_ade;
}

void ReportAccumulator::add(const SampleMetrics & sample, bool turning)
{
  accumulate(all_, sample);
  if (turning) {
    accumulate(turning_, sample);
  }
}

SliceReport ReportAccumulator::average(const Sums & sums)
{
  SliceReport r;
  r.count = sums.count;
  const double inv = sums.count > 0 ? 1.0 / static_cast<double>(sums.count) : 0.0;
  for (const auto & [name, k] : evaluated_ks()) {
    const auto it = sums.by_k.find(name);
    MetricRow row;
    if (it != sums.by_k.end()) {
      row = {it->second.ade * inv, it->second.fde * inv, it->second.aate * inv, it->second.acte * inv};
    }
    r.by_k[name] = row;
  }
  r.expected_ade = sums.expected_ade * inv;
  return r;
}

EvalReport ReportAccumulator::finalize() const { return {average(all_), average(turning_)}; }

nlohmann::json report_to_json(const EvalReport & report)
{
  auto slice = [](const SliceReport & s) {
    nlohmann::json j;
    j["count"] = s.count;
    j["expected_ade"] = s.expected_ade;
    for (const auto & [name, k] : evaluated_ks()) {
      const MetricRow & r = s.by_k.at(name);
      j[name] = {{"ade", r.ade}, {"fde", r.fde}, {"aate", r.aate}, {"acte", r.acte}};
    }
    return j;
  };
  return {{"all", slice(report.all)}, {"turning", slice(report.turning)}};
}

std::string report_to_table(const EvalReport & report)
{
  std::string out;
  char buf[64];
  out += "slice     count";
  for (const auto & [name, k] : evaluated_ks()) {
    for (const char * metric : {"ADE", "FDE", "AATE", "ACTE"}) {
      std::snprintf(buf, sizeof(buf), " %12s", (name + metric).c_str());
      out += buf;
    }
  }
  out += "       E[ADE]\n";
  for (const auto & [label, slice] : {std::pair<const char *, const SliceReport *>{"all", &report.all},
                                      {"turning", &report.turning}}) {
    std::snprintf(buf, sizeof(buf), "%-8s %6zu", label, slice->count);
    out += buf;
    for (const auto & [name, k] : evaluated_ks()) {
      const MetricRow & r = slice->by_k.at(name);
      for (double v : {r.ade, r.fde, r.aate, r.acte}) {
        std::snprintf(buf, sizeof(buf), " %12.3f", v);
        out += buf;
      }
    }
    std::snprintf(buf, sizeof(buf), " %12.3f\n", slice->expected_ade);
    out += buf;
  }
  return out;
}

}  // namespace goalpath
