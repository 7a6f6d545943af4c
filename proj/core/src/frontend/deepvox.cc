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

#include "deeptalk/frontend/deepvox.h"

#include <cmath>
#include <string>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

namespace {

// Gathers sliding windows of every frame into one matrix so the whole layer
// is a single GEMM. Column f*out_len + p holds the receptive field of output
// position p in frame f; row c*kernel + k indexes input channel c, tap k.
Eigen::MatrixXd Im2Col(const Eigen::MatrixXd& act, int frames, int in_len,
                       int kernel, int stride, int out_len) {
  const int in_ch = static_cast<int>(act.rows());
  Eigen::MatrixXd cols(in_ch * kernel, frames * out_len);
  for (int f = 0; f < frames; ++f) {
    for (int p = 0; p < out_len; ++p) {
      const int col = f * out_len + p;
      const int base = f * in_len + p * stride;
      for (int c = 0; c < in_ch; ++c) {
        for (int k = 0; k < kernel; ++k) {
          cols(c * kernel + k, col) = act(c, base + k);
        }
      }
    }
  }
  return cols;
}

}  // namespace

std::vector<Conv1dLayerSpec> DefaultDeepVoxSpec() {
  return {{7, 16, 1}, {5, 32, 1}, {5, 32, 1}, {3, 40, 1}};
}

std::vector<int> DeepVoxSeqLens(const std::vector<Conv1dLayerSpec>& spec,
                                int window) {
  Require(!spec.empty(), "conv stack must have at least one layer");
  std::vector<int> lens;
  lens.push_back(window);
  for (size_t i = 0; i < spec.size(); ++i) {
    Require(spec[i].kernel >= 1 && spec[i].channels >= 1 &&
                spec[i].stride >= 1,
            "conv layer " + std::to_string(i) + ": bad kernel/channels/stride");
    const int in_len = lens.back();
    Require(in_len >= spec[i].kernel,
            "window too short for conv stack: layer " + std::to_string(i) +
                " sees " + std::to_string(in_len) + " samples but needs " +
                std::to_string(spec[i].kernel));
    lens.push_back((in_len - spec[i].kernel) / spec[i].stride + 1);
  }
  return lens;
}

DeepVoxParams DeepVoxInit(const std::vector<Conv1dLayerSpec>& spec, int window,
                          uint64_t seed) {
  DeepVoxSeqLens(spec, window);
  Rng rng(seed);
  DeepVoxParams params;
  int in_ch = 1;
  for (const Conv1dLayerSpec& s : spec) {
    Conv1dLayer layer;
    layer.kernel = s.kernel;
    layer.stride = s.stride;
    layer.in_ch = in_ch;
    layer.out_ch = s.channels;
    const int fan_in = in_ch * s.kernel;
    const double scale = std::sqrt(2.0 / fan_in);
    layer.w.resize(s.channels, fan_in);
    for (int r = 0; r < layer.w.rows(); ++r) {
      for (int c = 0; c < layer.w.cols(); ++c) {
        layer.w(r, c) = scale * rng.Gaussian();
      }
    }
    layer.b = Eigen::VectorXd::Zero(s.channels);
    params.layers.push_back(std::move(layer));
    in_ch = s.channels;
  }
  return params;
}

Eigen::MatrixXd DeepVoxForward(const Eigen::MatrixXd& frames,
                               const DeepVoxParams& params,
                               DeepVoxCache* cache) {
  Require(!params.layers.empty(), "conv stack must have at least one layer");
  const int t_count = static_cast<int>(frames.rows());
  const int window = static_cast<int>(frames.cols());
  const int n_layers = static_cast<int>(params.layers.size());

  DeepVoxCache local;
  DeepVoxCache& c = cache ? *cache : local;
  c.frames = t_count;
  c.acts.clear();
  c.lens.clear();

  Eigen::MatrixXd act(1, t_count * window);
  for (int f = 0; f < t_count; ++f) {
    for (int i = 0; i < window; ++i) act(0, f * window + i) = frames(f, i);
  }
  c.acts.push_back(std::move(act));
  c.lens.push_back(window);

  for (int i = 0; i < n_layers; ++i) {
    const Conv1dLayer& layer = params.layers[i];
    const int in_len = c.lens.back();
    Require(layer.in_ch == c.acts.back().rows(),
            "conv layer " + std::to_string(i) + ": channel mismatch");
    Require(in_len >= layer.kernel,
            "conv layer " + std::to_string(i) + ": input length " +
                std::to_string(in_len) + " shorter than kernel " +
                std::to_string(layer.kernel));
    const int out_len = (in_len - layer.kernel) / layer.stride + 1;
    const Eigen::MatrixXd cols = Im2Col(c.acts.back(), t_count, in_len,
                                        layer.kernel, layer.stride, out_len);
    Eigen::MatrixXd out = layer.w * cols;
    out.colwise() += layer.b;
    if (i + 1 < n_layers) out = out.cwiseMax(0.0);
    Require(out.allFinite(),
            "numeric overflow in conv layer " + std::to_string(i));
    c.acts.push_back(std::move(out));
    c.lens.push_back(out_len);
  }

  // Global average pool over the intra-frame axis.
  const Eigen::MatrixXd& z = c.acts.back();
  const int out_ch = params.layers.back().out_ch;
  const int last_len = c.lens.back();
  Eigen::MatrixXd feats(t_count, out_ch);
  for (int f = 0; f < t_count; ++f) {
    feats.row(f) =
        z.middleCols(f * last_len, last_len).rowwise().mean().transpose();
  }
  return feats;
}

DeepVoxGrads ZeroDeepVoxGrads(const DeepVoxParams& params) {
  DeepVoxGrads grads;
  for (const Conv1dLayer& layer : params.layers) {
    grads.dw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    grads.db.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return grads;
}

void DeepVoxBackward(const DeepVoxParams& params, const DeepVoxCache& cache,
                     const Eigen::MatrixXd& d_feats, DeepVoxGrads* grads) {
  const int n_layers = static_cast<int>(params.layers.size());
  const int t_count = cache.frames;
  Require(static_cast<int>(cache.acts.size()) == n_layers + 1,
          "backward called with a stale cache");
  Require(static_cast<int>(grads->dw.size()) == n_layers,
          "gradient buffers do not match the conv stack");

  // Average pool backward: spread each feature gradient over the positions.
  const int last_len = cache.lens.back();
  Eigen::MatrixXd d_out(params.layers.back().out_ch, t_count * last_len);
  for (int f = 0; f < t_count; ++f) {
    for (int p = 0; p < last_len; ++p) {
      d_out.col(f * last_len + p) = d_feats.row(f).transpose() / last_len;
    }
  }

  for (int i = n_layers - 1; i >= 0; --i) {
    const Conv1dLayer& layer = params.layers[i];
    const int in_len = cache.lens[i];
    const int out_len = cache.lens[i + 1];
    const Eigen::MatrixXd cols = Im2Col(cache.acts[i], t_count, in_len,
                                        layer.kernel, layer.stride, out_len);
    grads->dw[i] += d_out * cols.transpose();
    grads->db[i] += d_out.rowwise().sum();
    if (i == 0) break;

    const Eigen::MatrixXd d_cols = layer.w.transpose() * d_out;
    Eigen::MatrixXd d_act =
        Eigen::MatrixXd::Zero(layer.in_ch, t_count * in_len);
    for (int f = 0; f < t_count; ++f) {
      for (int p = 0; p < out_len; ++p) {
        const int col = f * out_len + p;
        const int base = f * in_len + p * layer.stride;
        for (int ch = 0; ch < layer.in_ch; ++ch) {
          for (int k = 0; k < layer.kernel; ++k) {
            d_act(ch, base + k) += d_cols(ch * layer.kernel + k, col);
          }
        }
      }
    }
    // ReLU mask of the previous layer's output.
    d_out = d_act.cwiseProduct(
        (cache.acts[i].array() > 0.0).cast<double>().matrix());
  }
}

FeatureSequence ComputeFeatures(const Waveform& w, const FramingConfig& cfg,
                                const DeepVoxParams& params) {
  FeatureSequence seq;
  seq.values = DeepVoxForward(FrameSignal(w, cfg), params, nullptr);
  seq.frame_rate = static_cast<double>(kSampleRate) / cfg.hop;
  return seq;
}

}  // namespace deeptalk
