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

#ifndef GOALPATH__SVG_HPP_
#define GOALPATH__SVG_HPP_

#include "goalpath/features.hpp"
#include "goalpath/lane_map.hpp"
#include "goalpath/model.hpp"

#include <string>

namespace goalpath
{

// Static SVG of one prediction. Lanes, goal paths (class "goal-path"),
// predicted modes (class "mode", opacity equal to the joint probability),
// the target's history, and its ground truth future when present. Numbers
// are printed with two decimals, so output bytes depend only on the inputs.
std::string render_svg(const LaneMap & map, const ActorState & target, const WorldPrediction & prediction);

}  // namespace goalpath

#endif  // GOALPATH__SVG_HPP_
