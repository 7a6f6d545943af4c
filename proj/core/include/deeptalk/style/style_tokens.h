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

#ifndef DEEPTALK_STYLE_STYLE_TOKENS_H_
#define DEEPTALK_STYLE_STYLE_TOKENS_H_

#include <cstdint>

#include <Eigen/Core>

namespace deeptalk {

// Learnable bank of style tokens, one row per token. The reference encoding
// attends over the tanh-squashed tokens; the attended combination is the
// style embedding before normalization.
//
// Initialization: N(0, 1) scaled by 1/sqrt(dim), seeded.
Eigen::MatrixXd InitTokenBank(int num_tokens, int dim, uint64_t seed);

struct AttentionCache {
  Eigen::VectorXd ref;
  Eigen::MatrixXd tanh_tokens;  // num_tokens x dim
  Eigen::VectorXd weights;
};

// Scaled dot-product attention: score_i = ref . tanh(token_i) / sqrt(dim),
// weights = softmax(scores) computed with max subtraction. The result is a
// valid simplex: non-negative, summing to one.
Eigen::VectorXd Attend(const Eigen::VectorXd& ref,
                       const Eigen::MatrixXd& tokens, AttentionCache* cache);

// Sum_i w_i * tanh(token_i); lies in the convex hull of the squashed tokens.
Eigen::VectorXd Combine(const Eigen::VectorXd& weights,
                        const Eigen::MatrixXd& tokens);

// Backward through Combine(Attend(ref, tokens), tokens) jointly, given the
// gradient at the combined output. Accumulates into d_ref and d_tokens.
void AttendCombineBackward(const AttentionCache& cache,
                           const Eigen::VectorXd& d_combined,
                           Eigen::VectorXd* d_ref, Eigen::MatrixXd* d_tokens);

}  // namespace deeptalk

#endif  // DEEPTALK_STYLE_STYLE_TOKENS_H_
