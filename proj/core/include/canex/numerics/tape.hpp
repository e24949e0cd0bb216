// Copyright 2026 The canex Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "canex/numerics/tensor.hpp"

namespace canex::numerics {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  std::size_t id() const { return id_; }
  Tape& tape() const { return *tape_; }

  const Tensor& value() const;
  // Gradient accumulated by the last backward pass. Throws ContractViolation
  // when the node does not require a gradient.
  const Tensor& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode differentiation tape.
//
// Nodes are appended in evaluation order; backward() walks them in reverse.
// Leaves are either constants (never differentiated) or parameters, which
// form the gradient registry. A node requires a gradient iff at least one of
// its inputs does, so subgraphs built purely from constants cost nothing on
// the backward pass.
class Tape {
 public:
  // `out` is the node's value and grad_out the gradient w.r.t. it. grad_in[k]
  // is the accumulator for input k, or nullptr when input k needs no gradient.
  using Backward = std::function<void(const Tensor& out, const Tensor& grad_out,
                                      std::span<Tensor* const> grad_in)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Non-owning leaf; `value` must outlive the tape.
  Var constant_ref(const Tensor& value);
  Var parameter(Tensor value);
  Var parameter_ref(const Tensor& value);

  Var record(Tensor value, std::initializer_list<Var> inputs, Backward backward);
  Var record(Tensor value, const std::vector<Var>& inputs, Backward backward);

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1x1. After the
  // call every registered parameter owns a gradient of its own shape (zero if
  // it is not on any path to the loss). May be called once per tape.
  void backward(Var loss);

  const std::vector<Var>& registry() const { return registry_; }
  bool requires_grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }

  const Tensor& value(std::size_t id) const { return *nodes_[id].value; }
  const Tensor& grad(std::size_t id) const;

 private:
  struct Node {
    Tensor owned;
    const Tensor* value = nullptr;
    Tensor grad;
    bool has_grad = false;
    bool requires_grad = false;
    std::vector<std::size_t> inputs;
    Backward backward;
  };

  Var push_leaf(Tensor owned, const Tensor* external, bool trainable);
  Tensor& grad_slot(std::size_t id);

  std::deque<Node> nodes_;
  std::vector<Var> registry_;
  bool backward_done_ = false;
};

}  // namespace canex::numerics
