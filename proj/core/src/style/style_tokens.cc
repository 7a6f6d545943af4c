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

#include "deeptalk/style/style_tokens.h"

#include <cmath>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

Eigen::MatrixXd InitTokenBank(int num_tokens, int dim, uint64_t seed) {
  Require(num_tokens >= 2 && dim >= 1, "token bank needs >= 2 tokens");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::MatrixXd tokens(num_tokens, dim);
  for (int r = 0; r < num_tokens; ++r) {
    for (int c = 0; c < dim; ++c) tokens(r, c) = scale * rng.Gaussian();
  }
  Require((tokens.rowwise() - tokens.row(0)).cwiseAbs().maxCoeff() > 0.0,
          "token bank collapsed at initialization");
  return tokens;
}

Eigen::VectorXd Attend(const Eigen::VectorXd& ref,
                       const Eigen::MatrixXd& tokens, AttentionCache* cache) {
  Require(ref.size() == tokens.cols(),
          "reference encoding dimension does not match token dimension");
  const int n = static_cast<int>(tokens.rows());
  const Eigen::MatrixXd tanh_tokens =
      tokens.unaryExpr([](double v) { return std::tanh(v); });
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(tokens.cols()));
  Eigen::VectorXd scores = inv_scale * (tanh_tokens * ref);
  const double max_score = scores.maxCoeff();
  Eigen::VectorXd weights(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    weights(i) = std::exp(scores(i) - max_score);
    sum += weights(i);
  }
  weights /= sum;
  if (cache != nullptr) {
    cache->ref = ref;
    cache->tanh_tokens = tanh_tokens;
    cache->weights = weights;
  }
  return weights;
}

Eigen::VectorXd Combine(const Eigen::VectorXd& weights,
                        const Eigen::MatrixXd& tokens) {
  Require(weights.size() == tokens.rows(),
          "attention weights do not match the token count");
  Require(weights.minCoeff() >= 0.0 &&
              std::abs(weights.sum() - 1.0) <= 1e-9,
          "attention weights are not a valid simplex");
  const Eigen::MatrixXd tanh_tokens =
      tokens.unaryExpr([](double v) { return std::tanh(v); });
  return tanh_tokens.transpose() * weights;
}

void AttendCombineBackward(const AttentionCache& cache,
                           const Eigen::VectorXd& d_combined,
                           Eigen::VectorXd* d_ref, Eigen::MatrixXd* d_tokens) {
  const int n = static_cast<int>(cache.tanh_tokens.rows());
  const int dim = static_cast<int>(cache.tanh_tokens.cols());
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const Eigen::VectorXd& w = cache.weights;

  // combined = sum_i w_i * tau_i with tau = tanh(tokens).
  const Eigen::VectorXd d_w = cache.tanh_tokens * d_combined;
  Eigen::MatrixXd d_tau = w * d_combined.transpose();

  // Softmax backward onto the scores.
  const double dot = w.dot(d_w);
  const Eigen::VectorXd d_scores =
      w.cwiseProduct(d_w - Eigen::VectorXd::Constant(n, dot));

  // scores_i = inv_scale * (ref . tau_i).
  *d_ref += inv_scale * (cache.tanh_tokens.transpose() * d_scores);
  d_tau += inv_scale * (d_scores * cache.ref.transpose());

  // tanh backward onto the raw tokens.
  const Eigen::MatrixXd one_minus_sq =
      Eigen::MatrixXd::Ones(n, dim) - cache.tanh_tokens.cwiseProduct(
                                          cache.tanh_tokens);
  *d_tokens += d_tau.cwiseProduct(one_minus_sq);
}

}  // namespace deeptalk
