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

#include "deeptalk/trainer/optimizer.h"

#include <cmath>

#include "deeptalk/common/require.h"

namespace deeptalk {

AdamState InitAdamState(const std::vector<ParamRef>& params) {
  AdamState state;
  for (const ParamRef& p : params) {
    state.m.emplace_back(p.size, 0.0);
    state.v.emplace_back(p.size, 0.0);
  }
  return state;
}

void AdamStep(const AdamConfig& cfg, const std::vector<ParamRef>& params,
              const std::vector<ParamRef>& grads, AdamState* state) {
  Require(params.size() == grads.size() && params.size() == state->m.size(),
          "optimizer state does not match the parameter set");
  state->t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state->t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state->t));
  for (size_t i = 0; i < params.size(); ++i) {
    const ParamRef& p = params[i];
    const ParamRef& g = grads[i];
    Require(p.size == g.size &&
                p.size == static_cast<int64_t>(state->m[i].size()),
            "parameter " + p.name + ": gradient/state size mismatch");
    double* m = state->m[i].data();
    double* v = state->v[i].data();
    for (int64_t j = 0; j < p.size; ++j) {
      const double grad = g.data[j];
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * grad;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * grad * grad;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p.data[j] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
}

}  // namespace deeptalk
