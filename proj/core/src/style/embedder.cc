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

#include "deeptalk/style/embedder.h"

#include <cmath>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

namespace {

constexpr uint64_t kTagFrontend = 11;
constexpr uint64_t kTagRefEncoder = 12;
constexpr uint64_t kTagTokens = 13;

}  // namespace

EmbedderModel InitEmbedder(const EmbedderOptions& opts, uint64_t seed) {
  Require(opts.gru_hidden >= 1 && opts.num_tokens >= 2,
          "bad embedder dimensions");
  EmbedderModel model;
  model.opts = opts;
  model.frontend = DeepVoxInit(opts.frontend, opts.framing.window,
                               DeriveSeed(seed, kTagFrontend));
  model.ref = RefEncoderInit(opts.ref_conv, model.frontend.output_dim(),
                             opts.gru_hidden, DeriveSeed(seed, kTagRefEncoder));
  model.tokens = InitTokenBank(opts.num_tokens, opts.gru_hidden,
                               DeriveSeed(seed, kTagTokens));
  return model;
}

Eigen::VectorXd EmbedFrames(const EmbedderModel& model,
                            const Eigen::MatrixXd& frames, EmbedCache* cache) {
  EmbedCache local;
  EmbedCache& c = cache ? *cache : local;
  c.feats = DeepVoxForward(frames, model.frontend, &c.dv);
  c.ref = RefEncoderForward(c.feats, model.ref, &c.re);
  Attend(c.ref, model.tokens, &c.att);
  c.combined = c.att.tanh_tokens.transpose() * c.att.weights;
  if (!model.opts.l2_normalize) {
    c.norm = 1.0;
    c.embedding = c.combined;
    return c.embedding;
  }
  c.norm = c.combined.norm();
  Require(c.norm > 1e-12, "embedding norm underflow");
  c.embedding = c.combined / c.norm;
  return c.embedding;
}

DeepTalkEmbedding EmbedWaveform(const EmbedderModel& model, const Waveform& w) {
  Require(w.DurationSeconds() >= 1.0,
          "waveform shorter than 1 second: " + w.source_id);
  EmbedCache cache;
  EmbedFrames(model, FrameSignal(w, model.opts.framing), &cache);
  DeepTalkEmbedding emb;
  emb.vector = cache.embedding;
  emb.weights = cache.att.weights;
  return emb;
}

EmbedderGrads ZeroEmbedderGrads(const EmbedderModel& model) {
  EmbedderGrads g;
  g.frontend = ZeroDeepVoxGrads(model.frontend);
  g.ref = ZeroRefEncoderGrads(model.ref);
  g.d_tokens = Eigen::MatrixXd::Zero(model.tokens.rows(), model.tokens.cols());
  return g;
}

void EmbedBackward(const EmbedderModel& model, const EmbedCache& cache,
                   const Eigen::VectorXd& d_embedding, EmbedderGrads* grads) {
  Eigen::VectorXd d_combined;
  if (model.opts.l2_normalize) {
    // e = v / |v|; dv = (de - e * (e . de)) / |v|.
    const Eigen::VectorXd& e = cache.embedding;
    d_combined = (d_embedding - e * e.dot(d_embedding)) / cache.norm;
  } else {
    d_combined = d_embedding;
  }

  Eigen::VectorXd d_ref = Eigen::VectorXd::Zero(cache.ref.size());
  AttendCombineBackward(cache.att, d_combined, &d_ref, &grads->d_tokens);

  Eigen::MatrixXd d_feats;
  RefEncoderBackward(model.ref, cache.re, d_ref, &grads->ref, &d_feats);
  DeepVoxBackward(model.frontend, cache.dv, d_feats, &grads->frontend);
}

Eigen::VectorXd FrontendEmbed(const EmbedderModel& model, const Waveform& w) {
  Require(w.DurationSeconds() >= 1.0,
          "waveform shorter than 1 second: " + w.source_id);
  const Eigen::MatrixXd feats = DeepVoxForward(
      FrameSignal(w, model.opts.framing), model.frontend, nullptr);
  const int c = static_cast<int>(feats.cols());
  const Eigen::VectorXd mean = feats.colwise().mean().transpose();
  Eigen::VectorXd stddev(c);
  for (int j = 0; j < c; ++j) {
    const double var =
        (feats.col(j).array() - mean(j)).square().sum() / feats.rows();
    stddev(j) = std::sqrt(var);
  }
  Eigen::VectorXd pooled(2 * c);
  pooled.head(c) = mean;
  pooled.tail(c) = stddev;
  const double norm = pooled.norm();
  Require(norm > 1e-12, "pooled feature norm underflow");
  return pooled / norm;
}

std::vector<ParamRef> CollectParams(EmbedderModel* model) {
  std::vector<ParamRef> refs;
  auto add_mat = [&refs](const std::string& name, Eigen::MatrixXd* m) {
    refs.push_back({name, m->data(), m->size(),
                    {static_cast<int>(m->rows()), static_cast<int>(m->cols())}});
  };
  auto add_vec = [&refs](const std::string& name, Eigen::VectorXd* v) {
    refs.push_back({name, v->data(), v->size(),
                    {static_cast<int>(v->size())}});
  };
  for (size_t i = 0; i < model->frontend.layers.size(); ++i) {
    const std::string p = "frontend.conv" + std::to_string(i);
    add_mat(p + ".w", &model->frontend.layers[i].w);
    add_vec(p + ".b", &model->frontend.layers[i].b);
  }
  for (size_t i = 0; i < model->ref.conv.size(); ++i) {
    const std::string p = "ref.conv" + std::to_string(i);
    add_mat(p + ".w", &model->ref.conv[i].w);
    add_vec(p + ".b", &model->ref.conv[i].b);
  }
  add_mat("ref.gru.wz", &model->ref.gru.wz);
  add_mat("ref.gru.wr", &model->ref.gru.wr);
  add_mat("ref.gru.wc", &model->ref.gru.wc);
  add_mat("ref.gru.uz", &model->ref.gru.uz);
  add_mat("ref.gru.ur", &model->ref.gru.ur);
  add_mat("ref.gru.uc", &model->ref.gru.uc);
  add_vec("ref.gru.bz", &model->ref.gru.bz);
  add_vec("ref.gru.br", &model->ref.gru.br);
  add_vec("ref.gru.bc", &model->ref.gru.bc);
  add_mat("tokens", &model->tokens);
  return refs;
}

std::vector<ParamRef> CollectGrads(const EmbedderModel& model,
                                   EmbedderGrads* grads) {
  std::vector<ParamRef> refs;
  auto add_mat = [&refs](const std::string& name, Eigen::MatrixXd* m) {
    refs.push_back({name, m->data(), m->size(),
                    {static_cast<int>(m->rows()), static_cast<int>(m->cols())}});
  };
  auto add_vec = [&refs](const std::string& name, Eigen::VectorXd* v) {
    refs.push_back({name, v->data(), v->size(),
                    {static_cast<int>(v->size())}});
  };
  for (size_t i = 0; i < model.frontend.layers.size(); ++i) {
    const std::string p = "frontend.conv" + std::to_string(i);
    add_mat(p + ".w", &grads->frontend.dw[i]);
    add_vec(p + ".b", &grads->frontend.db[i]);
  }
  for (size_t i = 0; i < model.ref.conv.size(); ++i) {
    const std::string p = "ref.conv" + std::to_string(i);
    add_mat(p + ".w", &grads->ref.conv_dw[i]);
    add_vec(p + ".b", &grads->ref.conv_db[i]);
  }
  add_mat("ref.gru.wz", &grads->ref.dwz);
  add_mat("ref.gru.wr", &grads->ref.dwr);
  add_mat("ref.gru.wc", &grads->ref.dwc);
  add_mat("ref.gru.uz", &grads->ref.duz);
  add_mat("ref.gru.ur", &grads->ref.dur);
  add_mat("ref.gru.uc", &grads->ref.duc);
  add_vec("ref.gru.bz", &grads->ref.dbz);
  add_vec("ref.gru.br", &grads->ref.dbr);
  add_vec("ref.gru.bc", &grads->ref.dbc);
  add_mat("tokens", &grads->d_tokens);
  return refs;
}

}  // namespace deeptalk
