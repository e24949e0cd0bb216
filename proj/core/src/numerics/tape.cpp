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

#include "canex/numerics/tape.hpp"

#include <string>

#include "canex/error.hpp"

namespace canex::numerics {

const Tensor& Var::value() const {
  if (tape_ == nullptr) throw ContractViolation("Var::value on an empty handle");
  return tape_->value(id_);
}

const Tensor& Var::grad() const {
  if (tape_ == nullptr) throw ContractViolation("Var::grad on an empty handle");
  return tape_->grad(id_);
}

Var Tape::push_leaf(Tensor owned, const Tensor* external, bool trainable) {
  Node& node = nodes_.emplace_back();
  if (external != nullptr) {
    node.value = external;
  } else {
    node.owned = std::move(owned);
    node.value = &node.owned;
  }
  node.requires_grad = trainable;
  Var v(this, nodes_.size() - 1);
  if (trainable) registry_.push_back(v);
  return v;
}

Var Tape::constant(Tensor value) { return push_leaf(std::move(value), nullptr, false); }
Var Tape::constant_ref(const Tensor& value) { return push_leaf({}, &value, false); }
Var Tape::parameter(Tensor value) { return push_leaf(std::move(value), nullptr, true); }
Var Tape::parameter_ref(const Tensor& value) { return push_leaf({}, &value, true); }

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, Backward backward) {
  return record(std::move(value), std::vector<Var>(inputs), std::move(backward));
}

Var Tape::record(Tensor value, const std::vector<Var>& inputs, Backward backward) {
  if (backward_done_) throw ContractViolation("Tape::record after backward()");
  Node& node = nodes_.emplace_back();
  node.owned = std::move(value);
  node.value = &node.owned;
  node.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (in.tape_ != this) throw ContractViolation("Tape::record: input from another tape");
    node.inputs.push_back(in.id_);
    node.requires_grad = node.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return Var(this, nodes_.size() - 1);
}

bool Tape::requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }

const Tensor& Tape::grad(std::size_t id) const {
  const Node& node = nodes_[id];
  if (!node.requires_grad) {
    throw ContractViolation("gradient requested for node " + std::to_string(id) +
                            " which does not require one");
  }
  if (!node.has_grad) throw ContractViolation("gradient requested before backward()");
  return node.grad;
}

Tensor& Tape::grad_slot(std::size_t id) {
  Node& node = nodes_[id];
  if (!node.has_grad) {
    node.grad = Tensor::Zero(node.value->rows(), node.value->cols());
    node.has_grad = true;
  }
  return node.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this) throw ContractViolation("Tape::backward: loss from another tape");
  if (backward_done_) throw ContractViolation("Tape::backward called twice");
  const Tensor& lv = value(loss.id_);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ContractViolation("Tape::backward: loss must be a 1x1 tensor");
  }
  backward_done_ = true;

  if (nodes_[loss.id_].requires_grad) {
    grad_slot(loss.id_).setConstant(1.0);
    std::vector<Tensor*> grad_in;
    for (std::size_t i = loss.id_ + 1; i-- > 0;) {
      Node& node = nodes_[i];
      if (!node.requires_grad || !node.has_grad || !node.backward) continue;
      grad_in.assign(node.inputs.size(), nullptr);
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        if (nodes_[node.inputs[k]].requires_grad) grad_in[k] = &grad_slot(node.inputs[k]);
      }
      node.backward(*node.value, node.grad, grad_in);
    }
  }
  for (const Var& p : registry_) grad_slot(p.id_);
}

}  // namespace canex::numerics
