// Copyright (c) 2026 The DeepTalk Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPTALK_TRAINER_OPTIMIZER_H_
#define DEEPTALK_TRAINER_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "deeptalk/style/embedder.h"

namespace deeptalk {

// Gradient descent with first and second moment adaptation and bias
// correction.
struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  int64_t t = 0;
};

AdamState InitAdamState(const std::vector<ParamRef>& params);

// One update over all tensors; params and grads must be aligned views in the
// CollectParams / CollectGrads order.
void AdamStep(const AdamConfig& cfg, const std::vector<ParamRef>& params,
              const std::vector<ParamRef>& grads, AdamState* state);

}  // namespace deeptalk

#endif  // DEEPTALK_TRAINER_OPTIMIZER_H_
