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

#ifndef GOALPATH__TENSOR_HPP_
#define GOALPATH__TENSOR_HPP_

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace goalpath::tensor
{

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape & shape);

/// Dense row-major array of doubles.
class Array
{
public:
  Array() = default;
  explicit Array(Shape shape, double fill = 0.0);
  Array(Shape shape, std::vector<double> data);

  static Array scalar(double v) { return Array({1}, std::vector<double>{v}); }
  // A [1 x n] row.
  static Array row(std::vector<double> values);

  const Shape & shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double & operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Two-dimensional access.
  double & at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

  void fill(double v);

private:
  Shape shape_;
  std::vector<double> data_;
};

struct Node
{
  Array value;
  Array grad;
  bool requires_grad{false};
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node &)> backward;

  // Grad buffer, zero-initialized on first use.
  Array & grad_buffer();
};

/// Handle to a value in the reverse-mode graph. Copies share the node.
class Var
{
public:
  Var() = default;
  explicit Var(Array value, bool requires_grad = false);

  const Array & value() const { return node_->value; }
  const Shape & shape() const { return node_->value.shape(); }
  // Empty until backward() has reached this node.
  const Array & grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }
  bool defined() const { return node_ != nullptr; }

  // Seeds d(this)/d(this) = 1 (this must hold one element) and propagates.
  void backward() const;

  const std::shared_ptr<Node> & node() const { return node_; }
  static Var from_node(std::shared_ptr<Node> node);

private:
  std::shared_ptr<Node> node_;
};

// Creates a non-leaf node. `backward` is only kept when a parent needs grad.
Var make_op(Array value, std::vector<Var> parents, std::function<void(Node &)> backward);

// --- primitives -----------------------------------------------------------
// 2D ops work on [rows x cols] arrays; shape mismatches throw Error(kNumeric)
// naming both shapes.

Var matmul(const Var & a, const Var & b);
// x [n x in] * w [in x out] + b [1 x out], bias broadcast over rows.
Var linear(const Var & x, const Var & w, const Var & b);
Var add(const Var & a, const Var & b);
Var sub(const Var & a, const Var & b);
Var mul(const Var & a, const Var & b);
Var scale(const Var & a, double s);
// 1 - a.
Var one_minus(const Var & a);
Var relu(const Var & a);
Var tanh(const Var & a);
Var sigmoid(const Var & a);
Var concat_cols(const std::vector<Var> & parts);
Var concat_rows(const std::vector<Var> & parts);
Var repeat_rows(const Var & row, std::size_t count);
Var slice_cols(const Var & a, std::size_t begin, std::size_t end);
Var reshape(const Var & a, Shape shape);
// [n x c] -> [1 x c]; n must be >= 1.
Var mean_rows(const Var & a);
Var sum(const Var & a);
// Row-wise softmax over [r x c].
Var softmax_rows(const Var & a);
// col [r x 1] times every column of m [r x c].
Var mul_col_broadcast(const Var & col, const Var & m);
// x [c_in, h, w] with kernel [c_out, c_in, 3] applied along h with zero
// padding (output keeps h) and bias [c_out].
Var conv2d(const Var & x, const Var & kernel, const Var & bias);
// Non-overlapping max pooling over [c, h, w] with window (ph, pw).
Var maxpool2d(const Var & x, std::size_t ph, std::size_t pw);
// sum(weights * |pred - target|); target and weights are constants.
Var l1_loss(const Var & pred, const Array & target, const Array & weights);
// -sum(target * log(max(p, floor))); target is constant.
inline constexpr double kProbabilityFloor = 1e-12;
Var weighted_nll(const Var & probs, const Array & target);

// Gated recurrent cell. x [1 x in], h [1 x hidden]; w_input [in x 3*hidden],
// w_hidden [hidden x 3*hidden], biases [1 x 3*hidden]. Gate column blocks are
// ordered (update, reset, candidate).
Var recurrent_step(
  const Var & x, const Var & h, const Var & w_input, const Var & w_hidden, const Var & b_input,
  const Var & b_hidden);

// --- parameters and optimization -----------------------------------------

struct Parameter
{
  std::string name;
  Var var;

  const Array & value() const { return var.value(); }
  Array & mutable_value() const { return var.node()->value; }
  Array & gradient() const { return var.node()->grad_buffer(); }
};

/// Named parameters in registration order.
class ParameterStore
{
public:
  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization drawn from `rng_state`.
  Var add(const std::string & name, Shape shape, std::size_t fan_in, std::uint64_t & rng_state);
  Var add(const std::string & name, Array value);

  const std::vector<Parameter> & parameters() const { return params_; }
  const Parameter * find(const std::string & name) const;
  std::size_t total_size() const;
  void zero_grad();

  nlohmann::json to_json() const;
  // Shapes and names must match exactly.
  void load_json(const nlohmann::json & j);

private:
  std::vector<Parameter> params_;
};

struct AdamConfig
{
  double learning_rate{1e-3};
  double beta1{0.9};
  double beta2{0.999};
  double epsilon{1e-8};
};

struct AdamState
{
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step{0};
};

// One bias-corrected Adam update of `params` in place.
void adam_step(
  std::span<double> params, std::span<const double> grads, AdamState & state, const AdamConfig & config);

class Adam
{
public:
  Adam(ParameterStore & store, AdamConfig config);

  // Applies one update from the accumulated gradients, then zeroes them.
  void step();
  std::uint64_t steps() const { return state_.empty() ? 0 : state_.front().step; }
  double learning_rate() const { return config_.learning_rate; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }

  nlohmann::json to_json() const;
  void load_json(const nlohmann::json & j);

private:
  ParameterStore * store_;
  AdamConfig config_;
  std::vector<AdamState> state_;
};

}  // namespace goalpath::tensor

#endif  // GOALPATH__TENSOR_HPP_
