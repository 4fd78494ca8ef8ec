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

#include "goalpath/tensor.hpp"

#include "goalpath/error.hpp"
#include "goalpath/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <utility>

namespace goalpath::tensor
{

namespace
{

std::size_t shape_size(const Shape & shape)
{
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

[[noreturn]] void shape_mismatch(const char * op, const Shape & a, const Shape & b)
{
  throw numeric_error(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " + shape_string(b));
}

void require_rank(const char * op, const Var & v, std::size_t rank)
{
  if (v.value().rank() != rank) {
    throw numeric_error(
      std::string(op) + ": expected rank " + std::to_string(rank) + ", got " + shape_string(v.shape()));
  }
}

void require_same(const char * op, const Var & a, const Var & b)
{
  if (a.shape() != b.shape()) shape_mismatch(op, a.shape(), b.shape());
}

template <typename F>
Var unary(const Var & a, F && f, std::function<void(Node &)> backward)
{
  Array out(a.shape());
  const auto in = a.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = f(in[i]);
  return make_op(std::move(out), {a}, std::move(backward));
}

}  // namespace

std::string shape_string(const Shape & shape)
{
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += " x ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Array::Array(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Array::Array(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data))
{
  if (data_.size() != shape_size(shape_)) {
    throw numeric_error(
      "array data length " + std::to_string(data_.size()) + " does not match shape " + shape_string(shape_));
  }
}

Array Array::row(std::vector<double> values)
{
  const std::size_t n = values.size();
  return Array({1, n}, std::move(values));
}

void Array::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Array & Node::grad_buffer()
{
  if (grad.shape() != value.shape()) {
    grad = Array(value.shape(), 0.0);
  }
  return grad;
}

Var::Var(Array value, bool requires_grad) : node_(std::make_shared<Node>())
{
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Var Var::from_node(std::shared_ptr<Node> node)
{
  Var v;
  v.node_ = std::move(node);
  return v;
}

void Var::backward() const
{
  if (node_->value.size() != 1) {
    throw numeric_error("backward() needs a single-element root, got " + shape_string(shape()));
  }
  if (!node_->requires_grad) {
    return;
  }
  // Iterative post-order DFS yields a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> visited;
  std::vector<std::pair<Node *, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto & [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node * p = n->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  node_->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node * n = *it;
    if (n->backward && n->grad.size() == n->value.size()) {
      n->backward(*n);
    }
  }
}

Var make_op(Array value, std::vector<Var> parents, std::function<void(Node &)> backward)
{
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  for (const auto & p : parents) {
    node->requires_grad = node->requires_grad || p.requires_grad();
    node->parents.push_back(p.node());
  }
  if (node->requires_grad) {
    node->backward = std::move(backward);
  } else {
    node->parents.clear();
  }
  return Var::from_node(std::move(node));
}

// Accumulation target for parent i, or nullptr when it does not need grad.
static Array * parent_grad(Node & n, std::size_t i)
{
  Node & p = *n.parents[i];
  return p.requires_grad ? &p.grad_buffer() : nullptr;
}

Var matmul(const Var & a, const Var & b)
{
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) shape_mismatch("matmul", a.shape(), b.shape());
  Array out({m, n});
  const auto & av = a.value();
  const auto & bv = b.value();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double x = av.at(i, p);
      if (x == 0.0) continue;
      const double * brow = &bv.data()[p * n];
      double * orow = &out.data()[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += x * brow[j];
    }
  }
  return make_op(std::move(out), {a, b}, [m, k, n](Node & self) {
    const Array & g = self.grad;
    const Array & av = self.parents[0]->value;
    const Array & bv = self.parents[1]->value;
    if (Array * ga = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += g.at(i, j) * bv.at(p, j);
          ga->at(i, p) += acc;
        }
    }
    if (Array * gb = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double x = av.at(i, p);
          if (x == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gb->at(p, j) += x * g.at(i, j);
        }
    }
  });
}

Var linear(const Var & x, const Var & w, const Var & b)
{
  require_rank("linear", x, 2);
  require_rank("linear", w, 2);
  const std::size_t rows = x.shape()[0], in = x.shape()[1], out_dim = w.shape()[1];
  if (w.shape()[0] != in) shape_mismatch("linear", x.shape(), w.shape());
  if (b.value().size() != out_dim) shape_mismatch("linear", w.shape(), b.shape());
  Array out({rows, out_dim});
  const auto & xv = x.value();
  const auto & wv = w.value();
  const auto & bv = b.value();
  for (std::size_t i = 0; i < rows; ++i) {
    double * orow = &out.data()[i * out_dim];
    for (std::size_t j = 0; j < out_dim; ++j) orow[j] = bv[j];
    for (std::size_t p = 0; p < in; ++p) {
      const double v = xv.at(i, p);
      if (v == 0.0) continue;
      const double * wrow = &wv.data()[p * out_dim];
      for (std::size_t j = 0; j < out_dim; ++j) orow[j] += v * wrow[j];
    }
  }
  return make_op(std::move(out), {x, w, b}, [rows, in, out_dim](Node & self) {
    const Array & g = self.grad;
    const Array & xv = self.parents[0]->value;
    const Array & wv = self.parents[1]->value;
    if (Array * gx = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < rows; ++i) {
        const double * grow = &g.data()[i * out_dim];
        for (std::size_t p = 0; p < in; ++p) {
          const double * wrow = &wv.data()[p * out_dim];
          double acc = 0.0;
          for (std::size_t j = 0; j < out_dim; ++j) acc += grow[j] * wrow[j];
          gx->at(i, p) += acc;
        }
      }
    }
    if (Array * gw = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < rows; ++i) {
        const double * grow = &g.data()[i * out_dim];
        for (std::size_t p = 0; p < in; ++p) {
          const double v = xv.at(i, p);
          if (v == 0.0) continue;
          double * gwrow = &gw->data()[p * out_dim];
          for (std::size_t j = 0; j < out_dim; ++j) gwrow[j] += v * grow[j];
        }
      }
    }
    if (Array * gb = parent_grad(self, 2)) {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < out_dim; ++j) (*gb)[j] += g.at(i, j);
    }
  });
}

Var add(const Var & a, const Var & b)
{
  require_same("add", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] + b.value()[i];
  return make_op(std::move(out), {a, b}, [](Node & self) {
    for (std::size_t k = 0; k < 2; ++k)
      if (Array * g = parent_grad(self, k))
        for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
  });
}

Var sub(const Var & a, const Var & b)
{
  require_same("sub", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] - b.value()[i];
  return make_op(std::move(out), {a, b}, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
    if (Array * g = parent_grad(self, 1))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= self.grad[i];
  });
}

Var mul(const Var & a, const Var & b)
{
  require_same("mul", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] * b.value()[i];
  return make_op(std::move(out), {a, b}, [](Node & self) {
    const Array & av = self.parents[0]->value;
    const Array & bv = self.parents[1]->value;
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * bv[i];
    if (Array * g = parent_grad(self, 1))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * av[i];
  });
}

Var scale(const Var & a, double s)
{
  return unary(a, [s](double x) { return s * x; }, [s](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += s * self.grad[i];
  });
}

Var one_minus(const Var & a)
{
  return unary(a, [](double x) { return 1.0 - x; }, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= self.grad[i];
  });
}

Var relu(const Var & a)
{
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](Node & self) {
    const Array & av = self.parents[0]->value;
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i)
        if (av[i] > 0.0) (*g)[i] += self.grad[i];
  });
}

Var tanh(const Var & a)
{
  return unary(a, [](double x) { return std::tanh(x); }, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double y = self.value[i];
        (*g)[i] += self.grad[i] * (1.0 - y * y);
      }
  });
}

Var sigmoid(const Var & a)
{
  return unary(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double y = self.value[i];
        (*g)[i] += self.grad[i] * y * (1.0 - y);
      }
  });
}

Var concat_cols(const std::vector<Var> & parts)
{
  if (parts.empty()) throw numeric_error("concat_cols: no inputs");
  const std::size_t rows = parts[0].shape().at(0);
  std::size_t cols = 0;
  for (const auto & p : parts) {
    require_rank("concat_cols", p, 2);
    if (p.shape()[0] != rows) shape_mismatch("concat_cols", parts[0].shape(), p.shape());
    cols += p.shape()[1];
  }
  Array out({rows, cols});
  std::size_t offset = 0;
  for (const auto & p : parts) {
    const std::size_t c = p.shape()[1];
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < c; ++j) out.at(r, offset + j) = p.value().at(r, j);
    offset += c;
  }
  return make_op(std::move(out), parts, [rows, cols](Node & self) {
    std::size_t offset = 0;
    for (std::size_t k = 0; k < self.parents.size(); ++k) {
      const std::size_t c = self.parents[k]->value.dim(1);
      if (Array * g = parent_grad(self, k))
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t j = 0; j < c; ++j) g->at(r, j) += self.grad.at(r, offset + j);
      offset += c;
    }
    (void)cols;
  });
}

Var concat_rows(const std::vector<Var> & parts)
{
  if (parts.empty()) throw numeric_error("concat_rows: no inputs");
  const std::size_t cols = parts[0].shape().at(1);
  std::size_t rows = 0;
  for (const auto & p : parts) {
    require_rank("concat_rows", p, 2);
    if (p.shape()[1] != cols) shape_mismatch("concat_rows", parts[0].shape(), p.shape());
    rows += p.shape()[0];
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto & p : parts) data.insert(data.end(), p.value().data().begin(), p.value().data().end());
  return make_op(Array({rows, cols}, std::move(data)), parts, [](Node & self) {
    std::size_t offset = 0;
    for (std::size_t k = 0; k < self.parents.size(); ++k) {
      const std::size_t n = self.parents[k]->value.size();
      if (Array * g = parent_grad(self, k))
        for (std::size_t i = 0; i < n; ++i) (*g)[i] += self.grad[offset + i];
      offset += n;
    }
  });
}

Var repeat_rows(const Var & row, std::size_t count)
{
  require_rank("repeat_rows", row, 2);
  if (row.shape()[0] != 1) throw numeric_error("repeat_rows: expected one row, got " + shape_string(row.shape()));
  const std::size_t cols = row.shape()[1];
  Array out({count, cols});
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t j = 0; j < cols; ++j) out.at(r, j) = row.value()[j];
  return make_op(std::move(out), {row}, [count, cols](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t r = 0; r < count; ++r)
        for (std::size_t j = 0; j < cols; ++j) (*g)[j] += self.grad.at(r, j);
  });
}

Var slice_cols(const Var & a, std::size_t begin, std::size_t end)
{
  require_rank("slice_cols", a, 2);
  const std::size_t rows = a.shape()[0], cols = a.shape()[1];
  if (begin > end || end > cols) {
    throw numeric_error(
      "slice_cols: range [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of " + shape_string(a.shape()));
  }
  const std::size_t width = end - begin;
  Array out({rows, width});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < width; ++j) out.at(r, j) = a.value().at(r, begin + j);
  return make_op(std::move(out), {a}, [rows, width, begin](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < width; ++j) g->at(r, begin + j) += self.grad.at(r, j);
  });
}

Var reshape(const Var & a, Shape shape)
{
  if (shape_size(shape) != a.value().size()) shape_mismatch("reshape", a.shape(), shape);
  Array out(std::move(shape), std::vector<double>(a.value().data().begin(), a.value().data().end()));
  return make_op(std::move(out), {a}, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
  });
}

Var mean_rows(const Var & a)
{
  require_rank("mean_rows", a, 2);
  const std::size_t rows = a.shape()[0], cols = a.shape()[1];
  if (rows == 0) throw numeric_error("mean_rows: no rows");
  Array out({1, cols});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) out[j] += a.value().at(r, j);
  const double inv = 1.0 / static_cast<double>(rows);
  for (std::size_t j = 0; j < cols; ++j) out[j] *= inv;
  return make_op(std::move(out), {a}, [rows, cols, inv](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols; ++j) g->at(r, j) += inv * self.grad[j];
  });
}

Var sum(const Var & a)
{
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return make_op(Array::scalar(total), {a}, [](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[0];
  });
}

Var softmax_rows(const Var & a)
{
  require_rank("softmax_rows", a, 2);
  const std::size_t rows = a.shape()[0], cols = a.shape()[1];
  Array out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) hi = std::max(hi, a.value().at(r, j));
    double z = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      out.at(r, j) = std::exp(a.value().at(r, j) - hi);
      z += out.at(r, j);
    }
    for (std::size_t j = 0; j < cols; ++j) out.at(r, j) /= z;
  }
  return make_op(std::move(out), {a}, [rows, cols](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t r = 0; r < rows; ++r) {
        double dot = 0.0;
        for (std::size_t j = 0; j < cols; ++j) dot += self.grad.at(r, j) * self.value.at(r, j);
        for (std::size_t j = 0; j < cols; ++j)
          g->at(r, j) += self.value.at(r, j) * (self.grad.at(r, j) - dot);
      }
  });
}

Var mul_col_broadcast(const Var & col, const Var & m)
{
  require_rank("mul_col_broadcast", col, 2);
  require_rank("mul_col_broadcast", m, 2);
  const std::size_t rows = m.shape()[0], cols = m.shape()[1];
  if (col.shape()[0] != rows || col.shape()[1] != 1) shape_mismatch("mul_col_broadcast", col.shape(), m.shape());
  Array out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) out.at(r, j) = col.value()[r] * m.value().at(r, j);
  return make_op(std::move(out), {col, m}, [rows, cols](Node & self) {
    const Array & cv = self.parents[0]->value;
    const Array & mv = self.parents[1]->value;
    if (Array * g = parent_grad(self, 0))
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols; ++j) (*g)[r] += self.grad.at(r, j) * mv.at(r, j);
    if (Array * g = parent_grad(self, 1))
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols; ++j) g->at(r, j) += self.grad.at(r, j) * cv[r];
  });
}

Var conv2d(const Var & x, const Var & kernel, const Var & bias)
{
  require_rank("conv2d", x, 3);
  require_rank("conv2d", kernel, 3);
  const std::size_t c_in = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
  const std::size_t c_out = kernel.shape()[0];
  if (kernel.shape()[1] != c_in || kernel.shape()[2] != 3) shape_mismatch("conv2d", x.shape(), kernel.shape());
  if (bias.value().size() != c_out) shape_mismatch("conv2d", kernel.shape(), bias.shape());
  const std::size_t plane = h * w;

  Array out({c_out, h, w});
  const double * xd = x.value().data().data();
  const double * kd = kernel.value().data().data();
  double * od = out.data().data();
  for (std::size_t o = 0; o < c_out; ++o) {
    double * orow = od + o * plane;
    std::fill(orow, orow + plane, bias.value()[o]);
    for (std::size_t c = 0; c < c_in; ++c) {
      const double * xrow = xd + c * plane;
      for (std::size_t k = 0; k < 3; ++k) {
        const double kv = kd[(o * c_in + c) * 3 + k];
        // Output row i reads input row i + k - 1.
        const std::size_t out_begin = k == 0 ? w : 0;
        const std::size_t out_end = k == 2 ? plane - w : plane;
        const std::ptrdiff_t shift = (static_cast<std::ptrdiff_t>(k) - 1) * static_cast<std::ptrdiff_t>(w);
        for (std::size_t i = out_begin; i < out_end; ++i) orow[i] += kv * xrow[static_cast<std::ptrdiff_t>(i) + shift];
      }
    }
  }
  return make_op(std::move(out), {x, kernel, bias}, [c_in, c_out, w, plane](Node & self) {
    const double * gd = self.grad.data().data();
    const double * xd = self.parents[0]->value.data().data();
    const double * kd = self.parents[1]->value.data().data();
    Array * gx = parent_grad(self, 0);
    Array * gk = parent_grad(self, 1);
    Array * gb = parent_grad(self, 2);
    for (std::size_t o = 0; o < c_out; ++o) {
      const double * grow = gd + o * plane;
      if (gb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < plane; ++i) acc += grow[i];
        (*gb)[o] += acc;
      }
      for (std::size_t c = 0; c < c_in; ++c) {
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t out_begin = k == 0 ? w : 0;
          const std::size_t out_end = k == 2 ? plane - w : plane;
          const std::ptrdiff_t shift = (static_cast<std::ptrdiff_t>(k) - 1) * static_cast<std::ptrdiff_t>(w);
          const std::size_t kidx = (o * c_in + c) * 3 + k;
          if (gk) {
            const double * xrow = xd + c * plane;
            double acc = 0.0;
            for (std::size_t i = out_begin; i < out_end; ++i) acc += grow[i] * xrow[static_cast<std::ptrdiff_t>(i) + shift];
            (*gk)[kidx] += acc;
          }
          if (gx) {
            const double kv = kd[kidx];
            double * gxrow = gx->data().data() + c * plane;
            for (std::size_t i = out_begin; i < out_end; ++i) gxrow[static_cast<std::ptrdiff_t>(i) + shift] += kv * grow[i];
          }
        }
      }
    }
  });
}

Var maxpool2d(const Var & x, std::size_t ph, std::size_t pw)
{
  require_rank("maxpool2d", x, 3);
  const std::size_t c = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
  if (ph == 0 || pw == 0 || ph > h || pw > w) {
    throw numeric_error(
      "maxpool2d: window (" + std::to_string(ph) + ", " + std::to_string(pw) + ") does not fit " + shape_string(x.shape()));
  }
  const std::size_t oh = h / ph, ow = w / pw;
  Array out({c, oh, ow});
  std::vector<std::size_t> argmax(out.size());
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t i = 0; i < oh; ++i)
      for (std::size_t j = 0; j < ow; ++j) {
        std::size_t best = ch * h * w + (i * ph) * w + j * pw;
        for (std::size_t di = 0; di < ph; ++di)
          for (std::size_t dj = 0; dj < pw; ++dj) {
            const std::size_t idx = ch * h * w + (i * ph + di) * w + (j * pw + dj);
            if (x.value()[idx] > x.value()[best]) best = idx;
          }
        const std::size_t o = (ch * oh + i) * ow + j;
        out[o] = x.value()[best];
        argmax[o] = best;
      }
  return make_op(std::move(out), {x}, [argmax = std::move(argmax)](Node & self) {
    if (Array * g = parent_grad(self, 0))
      for (std::size_t o = 0; o < argmax.size(); ++o) (*g)[argmax[o]] += self.grad[o];
  });
}

Var l1_loss(const Var & pred, const Array & target, const Array & weights)
{
  if (pred.shape() != target.shape()) shape_mismatch("l1_loss", pred.shape(), target.shape());
  if (pred.shape() != weights.shape()) shape_mismatch("l1_loss", pred.shape(), weights.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (weights[i] != 0.0) total += weights[i] * std::abs(pred.value()[i] - target[i]);
  }
  return make_op(Array::scalar(total), {pred}, [target, weights](Node & self) {
    if (Array * g = parent_grad(self, 0)) {
      const Array & pv = self.parents[0]->value;
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double d = pv[i] - target[i];
        if (weights[i] == 0.0 || d == 0.0) continue;
        (*g)[i] += self.grad[0] * weights[i] * (d > 0.0 ? 1.0 : -1.0);
      }
    }
  });
}

Var weighted_nll(const Var & probs, const Array & target)
{
  if (probs.value().size() != target.size()) shape_mismatch("weighted_nll", probs.shape(), target.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] != 0.0) total -= target[i] * std::log(std::max(probs.value()[i], kProbabilityFloor));
  }
  return make_op(Array::scalar(total), {probs}, [target](Node & self) {
    if (Array * g = parent_grad(self, 0)) {
      const Array & pv = self.parents[0]->value;
      for (std::size_t i = 0; i < g->size(); ++i) {
        if (target[i] == 0.0 || pv[i] <= kProbabilityFloor) continue;
        (*g)[i] -= self.grad[0] * target[i] / pv[i];
      }
    }
  });
}

Var recurrent_step(
  const Var & x, const Var & h, const Var & w_input, const Var & w_hidden, const Var & b_input,
  const Var & b_hidden)
{
  const std::size_t hidden = h.shape().at(1);
  if (w_hidden.shape() != Shape{hidden, 3 * hidden}) {
    shape_mismatch("recurrent_step", h.shape(), w_hidden.shape());
  }
  const Var gx = linear(x, w_input, b_input);
  const Var gh = linear(h, w_hidden, b_hidden);
  const Var update = sigmoid(add(slice_cols(gx, 0, hidden), slice_cols(gh, 0, hidden)));
  const Var reset = sigmoid(add(slice_cols(gx, hidden, 2 * hidden), slice_cols(gh, hidden, 2 * hidden)));
  const Var candidate =
    tanh(add(slice_cols(gx, 2 * hidden, 3 * hidden), mul(reset, slice_cols(gh, 2 * hidden, 3 * hidden))));
  return add(mul(one_minus(update), candidate), mul(update, h));
}

// --- parameters -------------------------------------------------------------

Var ParameterStore::add(const std::string & name, Shape shape, std::size_t fan_in, std::uint64_t & rng_state)
{
  Rng rng(rng_state);
  rng_state = rng.next();
  Array value(std::move(shape));
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  for (auto & v : value.data()) v = rng.uniform(-bound, bound);
  return add(name, std::move(value));
}

Var ParameterStore::add(const std::string & name, Array value)
{
  if (find(name) != nullptr) {
    throw numeric_error("duplicate parameter " + name);
  }
  Var var(std::move(value), true);
  params_.push_back({name, var});
  return var;
}

const Parameter * ParameterStore::find(const std::string & name) const
{
  for (const auto & p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t ParameterStore::total_size() const
{
  std::size_t n = 0;
  for (const auto & p : params_) n += p.value().size();
  return n;
}

void ParameterStore::zero_grad()
{
  for (auto & p : params_) p.gradient().fill(0.0);
}

nlohmann::json ParameterStore::to_json() const
{
  auto arr = nlohmann::json::array();
  for (const auto & p : params_) {
    arr.push_back(
      {{"name", p.name},
       {"shape", p.value().shape()},
       {"data", std::vector<double>(p.value().data().begin(), p.value().data().end())}});
  }
  return arr;
}

void ParameterStore::load_json(const nlohmann::json & j)
{
  if (!j.is_array() || j.size() != params_.size()) {
    throw data_error(
      "checkpoint has " + std::to_string(j.is_array() ? j.size() : 0) + " parameters, model expects " +
      std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto & pj = j[i];
    const auto name = pj.at("name").get<std::string>();
    const auto shape = pj.at("shape").get<Shape>();
    if (name != params_[i].name || shape != params_[i].value().shape()) {
      throw data_error(
        "checkpoint parameter " + name + " " + shape_string(shape) + " does not match model parameter " +
        params_[i].name + " " + shape_string(params_[i].value().shape()));
    }
    auto data = pj.at("data").get<std::vector<double>>();
    params_[i].mutable_value() = Array(shape, std::move(data));
  }
}

// --- Adam ---------------------------------------------------------------------

void adam_step(
  std::span<double> params, std::span<const double> grads, AdamState & state, const AdamConfig & config)
{
  if (params.size() != grads.size()) {
    throw numeric_error("adam_step: parameter and gradient sizes differ");
  }
  if (state.first_moment.size() != params.size()) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.first_moment[i] = config.beta1 * state.first_moment[i] + (1.0 - config.beta1) * g;
    state.second_moment[i] = config.beta2 * state.second_moment[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.first_moment[i] / c1;
    const double v_hat = state.second_moment[i] / c2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

Adam::Adam(ParameterStore & store, AdamConfig config)
: store_(&store), config_(config), state_(store.parameters().size())
{
}

void Adam::step()
{
  const auto & params = store_->parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_step(params[i].mutable_value().data(), params[i].gradient().data(), state_[i], config_);
  }
  store_->zero_grad();
}

nlohmann::json Adam::to_json() const
{
  auto arr = nlohmann::json::array();
  for (const auto & s : state_) {
    arr.push_back({{"step", s.step}, {"m", s.first_moment}, {"v", s.second_moment}});
  }
  return arr;
}

void Adam::load_json(const nlohmann::json & j)
{
  if (!j.is_array() || j.size() != state_.size()) {
    throw data_error("optimizer state does not match the parameter count");
  }
  for (std::size_t i = 0; i < state_.size(); ++i) {
    state_[i].step = j[i].at("step").get<std::uint64_t>();
    state_[i].first_moment = j[i].at("m").get<std::vector<double>>();
    state_[i].second_moment = j[i].at("v").get<std::vector<double>>();
  }
}

}  // namespace goalpath::tensor
