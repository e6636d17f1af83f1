/*
 * Copyright 2026 The Artic Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARTIC_NN_AUTOGRAD_HPP_
#define ARTIC_NN_AUTOGRAD_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "artic/errors.hpp"

namespace artic::nn {

using Index = Eigen::Index;

// Activations are [channels x time], row-major so each channel is contiguous.
template <typename Scalar>
using Tensor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {
inline thread_local bool grad_mode = true;
}  // namespace detail

inline bool grad_enabled() { return detail::grad_mode; }

class NoGradGuard {
 public:
  NoGradGuard() : previous_(detail::grad_mode) { detail::grad_mode = false; }
  ~NoGradGuard() { detail::grad_mode = previous_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// A named trainable tensor. `shape` is the logical shape written to
// checkpoints; `value` stores it flattened to 2-D (row-major order matches
// the logical layout).
template <typename Scalar>
struct Parameter {
  std::string name;
  std::vector<std::int64_t> shape;
  Tensor<Scalar> value;
  Tensor<Scalar> grad;

  Parameter() = default;
  Parameter(std::string n, std::vector<std::int64_t> s, Index rows, Index cols)
      : name(std::move(n)), shape(std::move(s)), value(Tensor<Scalar>::Zero(rows, cols)),
        grad(Tensor<Scalar>::Zero(rows, cols)) {}

  Index size() const { return value.size(); }
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

template <typename Scalar>
using ParameterList = std::vector<Parameter<Scalar>*>;

template <typename Scalar>
struct Node {
  Tensor<Scalar> data;
  const Tensor<Scalar>* alias = nullptr;  // parameter leaves read the parameter in place
  Tensor<Scalar> grad;
  Parameter<Scalar>* param = nullptr;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(const Tensor<Scalar>&)> backward;

  const Tensor<Scalar>& value() const { return alias ? *alias : data; }

  template <typename Derived>
  void accumulate(const Eigen::MatrixBase<Derived>& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

template <typename Scalar>
class Var {
 public:
  Var() = default;
  explicit Var(Tensor<Scalar> value) : node_(std::make_shared<Node<Scalar>>()) {
    node_->data = std::move(value);
  }

  static Var parameter(Parameter<Scalar>& p) {
    Var v;
    v.node_ = std::make_shared<Node<Scalar>>();
    v.node_->alias = &p.value;
    v.node_->param = &p;
    v.node_->requires_grad = grad_enabled();
    return v;
  }

  bool defined() const { return node_ != nullptr; }
  const Tensor<Scalar>& value() const { return node_->value(); }
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  Scalar item() const { return value()(0, 0); }

  Node<Scalar>& node() const { return *node_; }
  const std::shared_ptr<Node<Scalar>>& ptr() const { return node_; }

  // Adds g to this variable's gradient if it participates in backprop.
  template <typename Derived>
  void accumulate(const Eigen::MatrixBase<Derived>& g) const {
    if (requires_grad()) node_->accumulate(g);
  }

 private:
  std::shared_ptr<Node<Scalar>> node_;
};

// Wraps an op result, recording the backward closure when gradients are on
// and at least one input needs them.
template <typename Scalar, typename Backward>
Var<Scalar> make_result(Tensor<Scalar> value, std::initializer_list<Var<Scalar>> inputs,
                        Backward&& backward) {
  Var<Scalar> out(std::move(value));
  if (!grad_enabled()) return out;
  for (const auto& in : inputs) {
    if (in.requires_grad()) out.node().parents.push_back(in.ptr());
  }
  if (out.node().parents.empty()) return out;
  out.node().requires_grad = true;
  out.node().backward = std::forward<Backward>(backward);
  return out;
}

template <typename Scalar, typename Backward>
Var<Scalar> make_result(Tensor<Scalar> value, const std::vector<Var<Scalar>>& inputs,
                        Backward&& backward) {
  Var<Scalar> out(std::move(value));
  if (!grad_enabled()) return out;
  for (const auto& in : inputs) {
    if (in.requires_grad()) out.node().parents.push_back(in.ptr());
  }
  if (out.node().parents.empty()) return out;
  out.node().requires_grad = true;
  out.node().backward = std::forward<Backward>(backward);
  return out;
}

// Reverse-mode sweep from a 1x1 root. Parameter gradients accumulate into
// Parameter::grad; intermediate gradients are released afterwards.
template <typename Scalar>
void backward(const Var<Scalar>& root) {
  if (root.rows() != 1 || root.cols() != 1) throw ShapeError("backward: root must be a scalar");
  if (!root.requires_grad()) return;

  std::vector<Node<Scalar>*> order;
  std::unordered_set<Node<Scalar>*> visited;
  std::vector<std::pair<Node<Scalar>*, std::size_t>> stack{{&root.node(), 0}};
  visited.insert(&root.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node<Scalar>* parent = node->parents[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root.node().grad = Tensor<Scalar>::Ones(1, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<Scalar>* node = *it;
    if (node->grad.size() == 0) continue;
    if (node->backward) node->backward(node->grad);
    if (node->param) {
      if (node->param->grad.size() == 0) node->param->zero_grad();
      node->param->grad += node->grad;
    }
  }
  for (Node<Scalar>* node : order) node->grad.resize(0, 0);
}

// Returns a constant copy that blocks gradient flow.
template <typename Scalar>
Var<Scalar> detach(const Var<Scalar>& x) {
  return Var<Scalar>(x.value());
}

template <typename Scalar>
std::size_t count_parameters(const ParameterList<Scalar>& params) {
  std::size_t n = 0;
  for (const auto* p : params) n += static_cast<std::size_t>(p->size());
  return n;
}

template <typename Scalar>
void zero_grad(const ParameterList<Scalar>& params) {
  for (auto* p : params) p->zero_grad();
}

}  // namespace artic::nn

#endif  // ARTIC_NN_AUTOGRAD_HPP_
