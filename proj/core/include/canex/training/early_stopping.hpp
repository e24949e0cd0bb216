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

#include <limits>

namespace canex::training {

// Stops once the validation loss has not strictly decreased for `patience`
// consecutive epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  // Records epoch `epoch` (1-based). Returns true when training should stop
  // after it.
  bool observe(int epoch, double val_loss);

  bool last_improved() const { return last_improved_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  int patience() const { return patience_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
  int since_best_ = 0;
  bool last_improved_ = false;
};

}  // namespace canex::training
