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

#include "canex/training/early_stopping.hpp"

#include "canex/error.hpp"

namespace canex::training {

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw InvalidArgument("early stopping patience must be >= 1");
}

bool EarlyStopping::observe(int epoch, double val_loss) {
  last_improved_ = val_loss < best_loss_;
  if (last_improved_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return false;
  }
  ++since_best_;
  return since_best_ >= patience_;
}

}  // namespace canex::training
