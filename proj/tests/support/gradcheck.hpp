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

#ifndef GOALPATH_TESTS__GRADCHECK_HPP_
#define GOALPATH_TESTS__GRADCHECK_HPP_

#include "goalpath/random.hpp"
#include "goalpath/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace goalpath::oracle
{

struct GradCheck
{
  double max_rel_error{0.0};
  std::size_t checked{0};
};

inline tensor::Array random_array(tensor::Shape shape, Rng & rng, double lo = -1.0, double hi = 1.0)
{
  tensor::Array a(shape);
  for (double & v : a.data()) v = rng.uniform(lo, hi);
  return a;
}

// Compares reverse-mode gradients of sum(f(inputs) * probe) against central
// differences with step h. The relative error of each entry is
// |analytic - numeric| / max(floor, |analytic|, |numeric|).
inline GradCheck check_gradients(
  const std::function<tensor::Var(const std::vector<tensor::Var> &)> & f, std::vector<tensor::Array> inputs,
  std::uint64_t seed, double h = 1e-5, double floor = 1e-6)
{
  using tensor::Array;
  using tensor::Var;
  Rng rng(seed);
  auto build = [&](const std::vector<Array> & values, std::vector<Var> & vars) {
    vars.clear();
    for (const Array & a : values) vars.emplace_back(a, true);
    return f(vars);
  };

  std::vector<Var> vars;
  const Var out = build(inputs, vars);
  const Array probe = random_array(out.shape(), rng, 0.5, 1.5);
  auto objective = [&](const Var & o) { return tensor::sum(tensor::mul(o, Var(probe))); };

  objective(out).backward();
  std::vector<Array> analytic;
  for (const Var & v : vars) {
    analytic.push_back(v.grad().size() ? v.grad() : Array(v.shape(), 0.0));
  }

  GradCheck result;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double saved = inputs[i][k];
      inputs[i][k] = saved + h;
      std::vector<Var> tmp;
      const double up = objective(build(inputs, tmp)).value()[0];
      inputs[i][k] = saved - h;
      const double down = objective(build(inputs, tmp)).value()[0];
      inputs[i][k] = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[i][k];
      const double err = std::abs(a - numeric) / std::max({floor, std::abs(a), std::abs(numeric)});
      result.max_rel_error = std::max(result.max_rel_error, err);
      ++result.checked;
    }
  }
  return result;
}

}  // namespace goalpath::oracle

#endif  // GOALPATH_TESTS__GRADCHECK_HPP_
