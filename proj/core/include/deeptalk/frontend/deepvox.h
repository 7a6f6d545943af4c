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

#ifndef DEEPTALK_FRONTEND_DEEPVOX_H_
#define DEEPTALK_FRONTEND_DEEPVOX_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/frontend/framing.h"

namespace deeptalk {

struct Conv1dLayerSpec {
  int kernel = 3;
  int channels = 16;
  int stride = 1;
};

// Learnable filterbank mapping each raw-audio frame independently through a
// 1D conv stack (valid convolution, ReLU between layers) and averaging over
// the intra-frame time axis, so one frame becomes one feature vector.
struct Conv1dLayer {
  int kernel = 0;
  int stride = 0;
  int in_ch = 0;
  int out_ch = 0;
  Eigen::MatrixXd w;  // out_ch x (in_ch * kernel)
  Eigen::VectorXd b;  // out_ch
};

struct DeepVoxParams {
  std::vector<Conv1dLayer> layers;
  int output_dim() const { return layers.back().out_ch; }
};

struct FeatureSequence {
  Eigen::MatrixXd values;   // T x C
  double frame_rate = 0.0;  // frames per second
};

// Four layers, kernels {7,5,5,3}, channels {16,32,32,40}, stride 1.
std::vector<Conv1dLayerSpec> DefaultDeepVoxSpec();

// Per-frame sequence length after each conv layer; fails if the window is too
// short to survive the stack. Returns lengths[0..L] with lengths[0] = window.
std::vector<int> DeepVoxSeqLens(const std::vector<Conv1dLayerSpec>& spec,
                                int window);

// He-style init: weights ~ N(0, 2/fan_in), biases zero. Deterministic.
DeepVoxParams DeepVoxInit(const std::vector<Conv1dLayerSpec>& spec, int window,
                          uint64_t seed);

struct DeepVoxCache {
  int frames = 0;
  // acts[0] is the framed input (1 x T*window); acts[i+1] is the output of
  // layer i, post-ReLU except for the last layer which stays linear.
  std::vector<Eigen::MatrixXd> acts;
  std::vector<int> lens;  // per-frame sequence length at each level
};

// frames: T x window. Returns T x C features. cache may be null.
Eigen::MatrixXd DeepVoxForward(const Eigen::MatrixXd& frames,
                               const DeepVoxParams& params,
                               DeepVoxCache* cache);

struct DeepVoxGrads {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
};

DeepVoxGrads ZeroDeepVoxGrads(const DeepVoxParams& params);

// Accumulates parameter gradients for d(loss)/d(features) = d_feats (T x C).
void DeepVoxBackward(const DeepVoxParams& params, const DeepVoxCache& cache,
                     const Eigen::MatrixXd& d_feats, DeepVoxGrads* grads);

// Convenience wrapper producing the feature sequence for a waveform.
FeatureSequence ComputeFeatures(const Waveform& w, const FramingConfig& cfg,
                                const DeepVoxParams& params);

}  // namespace deeptalk

#endif  // DEEPTALK_FRONTEND_DEEPVOX_H_
