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

#ifndef DEEPTALK_STYLE_REF_ENCODER_H_
#define DEEPTALK_STYLE_REF_ENCODER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace deeptalk {

struct Conv2dLayerSpec {
  int kernel = 3;
  int channels = 16;
  int stride = 2;
};

// Channel-major 2D feature map: data(c, y*w + x).
struct FeatureMap {
  Eigen::MatrixXd data;
  int h = 0;
  int w = 0;
};

struct Conv2dLayer {
  int kernel = 0;
  int stride = 0;
  int in_ch = 0;
  int out_ch = 0;
  Eigen::MatrixXd w;  // out_ch x (in_ch * kernel * kernel)
  Eigen::VectorXd b;
};

struct GruParams {
  Eigen::MatrixXd wz, wr, wc;  // hidden x input
  Eigen::MatrixXd uz, ur, uc;  // hidden x hidden
  Eigen::VectorXd bz, br, bc;
};

// Summarizes a T x C feature sequence into one vector: a strided 2D conv
// stack over the (time, feature) map, the surviving feature axis flattened
// per time step, then a unidirectional GRU whose final hidden state is the
// reference encoding.
struct RefEncoderParams {
  std::vector<Conv2dLayer> conv;
  GruParams gru;
  int hidden = 0;
  int gru_input_dim = 0;
};

// Four layers, 3x3 kernels, stride 2x2, channels {16,16,32,32}.
std::vector<Conv2dLayerSpec> DefaultRefConvSpec();

// Output extent of one spatial axis under same-padding striding: ceil(in/s).
int SameOutExtent(int in, int stride);

RefEncoderParams RefEncoderInit(const std::vector<Conv2dLayerSpec>& spec,
                                int feat_dim, int hidden, uint64_t seed);

struct RefEncoderCache {
  std::vector<FeatureMap> maps;  // maps[0] input; maps[i+1] post-ReLU conv i
  Eigen::MatrixXd xs;            // GRU inputs, T' x input_dim
  Eigen::MatrixXd hs, zs, rs, cs;  // per-step GRU state, T' x hidden
};

// feats: T x C with T >= 4. Returns the final GRU hidden state (hidden-dim).
Eigen::VectorXd RefEncoderForward(const Eigen::MatrixXd& feats,
                                  const RefEncoderParams& params,
                                  RefEncoderCache* cache);

struct RefEncoderGrads {
  std::vector<Eigen::MatrixXd> conv_dw;
  std::vector<Eigen::VectorXd> conv_db;
  Eigen::MatrixXd dwz, dwr, dwc, duz, dur, duc;
  Eigen::VectorXd dbz, dbr, dbc;
};

RefEncoderGrads ZeroRefEncoderGrads(const RefEncoderParams& params);

// Accumulates parameter gradients; d_feats (T x C), if non-null, receives the
// gradient w.r.t. the input features for joint frontend training.
void RefEncoderBackward(const RefEncoderParams& params,
                        const RefEncoderCache& cache,
                        const Eigen::VectorXd& d_ref, RefEncoderGrads* grads,
                        Eigen::MatrixXd* d_feats);

// Standalone GRU pass over a T x input matrix (row per step), exposed for
// causality tests. Returns all hidden states, T x hidden.
Eigen::MatrixXd GruForwardAll(const GruParams& gru, const Eigen::MatrixXd& xs);

}  // namespace deeptalk

#endif  // DEEPTALK_STYLE_REF_ENCODER_H_
