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

#include "canex/numerics/adam.hpp"

#include <cmath>

#include "canex/error.hpp"

namespace canex::numerics {

AdamState::AdamState(std::span<const Tensor* const> shapes, AdamHyper hyper) : hyper_(hyper) {
  m_.reserve(shapes.size());
  v_.reserve(shapes.size());
  for (const Tensor* t : shapes) {
    m_.push_back(Tensor::Zero(t->rows(), t->cols()));
    v_.push_back(Tensor::Zero(t->rows(), t->cols()));
  }
}

void AdamState::apply(std::span<Tensor* const> params, std::span<const Tensor* const> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ContractViolation("adam: expected " + std::to_string(m_.size()) +
                            " parameter tensors");
  }
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (params[k]->rows() != m_[k].rows() || params[k]->cols() != m_[k].cols() ||
        grads[k]->rows() != m_[k].rows() || grads[k]->cols() != m_[k].cols()) {
      throw ContractViolation("adam: shape mismatch for parameter " + std::to_string(k));
    }
  }
  ++step_;
  const double b1 = hyper_.beta1;
  const double b2 = hyper_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = hyper_.learning_rate;
  const double eps = hyper_.epsilon;
  for (std::size_t k = 0; k < m_.size(); ++k) {
    auto m = m_[k].array();
    auto v = v_[k].array();
    const auto g = grads[k]->array();
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.square();
    params[k]->array() -= lr * (m / c1) / ((v / c2).sqrt() + eps);
  }
}

}  // namespace canex::numerics
