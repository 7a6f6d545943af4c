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

#ifndef DEEPTALK_STYLE_EMBEDDER_H_
#define DEEPTALK_STYLE_EMBEDDER_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/frontend/deepvox.h"
#include "deeptalk/style/ref_encoder.h"
#include "deeptalk/style/style_tokens.h"

namespace deeptalk {

struct EmbedderOptions {
  FramingConfig framing;
  std::vector<Conv1dLayerSpec> frontend = DefaultDeepVoxSpec();
  std::vector<Conv2dLayerSpec> ref_conv = DefaultRefConvSpec();
  int gru_hidden = 128;  // also the token and embedding dimension
  int num_tokens = 10;
  bool l2_normalize = true;
};

// Full vocal-style encoder: raw-audio filterbank, reference encoder,
// attention over the token bank, optional L2 normalization.
struct EmbedderModel {
  EmbedderOptions opts;
  DeepVoxParams frontend;
  RefEncoderParams ref;
  Eigen::MatrixXd tokens;  // num_tokens x gru_hidden
};

// Unit-norm style vector plus the attention weights that produced it.
struct DeepTalkEmbedding {
  Eigen::VectorXd vector;
  Eigen::VectorXd weights;
};

EmbedderModel InitEmbedder(const EmbedderOptions& opts, uint64_t seed);

struct EmbedCache {
  DeepVoxCache dv;
  Eigen::MatrixXd feats;
  RefEncoderCache re;
  Eigen::VectorXd ref;
  AttentionCache att;
  Eigen::VectorXd combined;
  double norm = 0.0;
  Eigen::VectorXd embedding;
};

// Embeds pre-framed audio (T x window rows). cache may be null.
Eigen::VectorXd EmbedFrames(const EmbedderModel& model,
                            const Eigen::MatrixXd& frames, EmbedCache* cache);

// Embeds a waveform of at least one second.
DeepTalkEmbedding EmbedWaveform(const EmbedderModel& model, const Waveform& w);

struct EmbedderGrads {
  DeepVoxGrads frontend;
  RefEncoderGrads ref;
  Eigen::MatrixXd d_tokens;
};

EmbedderGrads ZeroEmbedderGrads(const EmbedderModel& model);

// Accumulates gradients of a scalar loss with gradient d_embedding at the
// final embedding, back through every parameter group.
void EmbedBackward(const EmbedderModel& model, const EmbedCache& cache,
                   const Eigen::VectorXd& d_embedding, EmbedderGrads* grads);

// Companion verification system: mean and standard deviation of the
// filterbank features pooled over frames, L2-normalized (2C dims).
Eigen::VectorXd FrontendEmbed(const EmbedderModel& model, const Waveform& w);

// Named flat view over all learnable parameters, in a fixed order shared by
// the optimizer, the checkpoint format, and gradient checking.
struct ParamRef {
  std::string name;
  double* data = nullptr;
  int64_t size = 0;
  std::vector<int> shape;
};

std::vector<ParamRef> CollectParams(EmbedderModel* model);
std::vector<ParamRef> CollectGrads(const EmbedderModel& model,
                                   EmbedderGrads* grads);

}  // namespace deeptalk

#endif  // DEEPTALK_STYLE_EMBEDDER_H_
