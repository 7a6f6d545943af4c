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

#include "deeptalk/style/ref_encoder.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

namespace {

struct Pad {
  int top = 0;
  int left = 0;
};

Pad SamePadding(int in_h, int in_w, int kernel, int stride, int out_h,
                int out_w) {
  const int total_h = std::max((out_h - 1) * stride + kernel - in_h, 0);
  const int total_w = std::max((out_w - 1) * stride + kernel - in_w, 0);
  return {total_h / 2, total_w / 2};
}

Eigen::MatrixXd GaussianMatrix(int rows, int cols, double scale, Rng* rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = scale * rng->Gaussian();
  }
  return m;
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<Conv2dLayerSpec> DefaultRefConvSpec() {
  return {{3, 16, 2}, {3, 16, 2}, {3, 32, 2}, {3, 32, 2}};
}

int SameOutExtent(int in, int stride) { return (in + stride - 1) / stride; }

RefEncoderParams RefEncoderInit(const std::vector<Conv2dLayerSpec>& spec,
                                int feat_dim, int hidden, uint64_t seed) {
  Require(!spec.empty(), "reference encoder needs at least one conv layer");
  Require(feat_dim >= 1 && hidden >= 1, "bad reference encoder dimensions");
  Rng rng(seed);
  RefEncoderParams params;
  params.hidden = hidden;
  int in_ch = 1;
  int width = feat_dim;
  for (const Conv2dLayerSpec& s : spec) {
    Require(s.kernel >= 1 && s.channels >= 1 && s.stride >= 1,
            "bad conv2d layer spec");
    Conv2dLayer layer;
    layer.kernel = s.kernel;
    layer.stride = s.stride;
    layer.in_ch = in_ch;
    layer.out_ch = s.channels;
    const int fan_in = in_ch * s.kernel * s.kernel;
    layer.w = GaussianMatrix(s.channels, fan_in, std::sqrt(2.0 / fan_in), &rng);
    layer.b = Eigen::VectorXd::Zero(s.channels);
    params.conv.push_back(std::move(layer));
    in_ch = s.channels;
    width = SameOutExtent(width, s.stride);
  }
  params.gru_input_dim = in_ch * width;

  const double wscale = std::sqrt(1.0 / params.gru_input_dim);
  const double uscale = std::sqrt(1.0 / hidden);
  params.gru.wz = GaussianMatrix(hidden, params.gru_input_dim, wscale, &rng);
  params.gru.wr = GaussianMatrix(hidden, params.gru_input_dim, wscale, &rng);
  params.gru.wc = GaussianMatrix(hidden, params.gru_input_dim, wscale, &rng);
  params.gru.uz = GaussianMatrix(hidden, hidden, uscale, &rng);
  params.gru.ur = GaussianMatrix(hidden, hidden, uscale, &rng);
  params.gru.uc = GaussianMatrix(hidden, hidden, uscale, &rng);
  params.gru.bz = Eigen::VectorXd::Zero(hidden);
  params.gru.br = Eigen::VectorXd::Zero(hidden);
  params.gru.bc = Eigen::VectorXd::Zero(hidden);
  return params;
}

Eigen::MatrixXd GruForwardAll(const GruParams& gru, const Eigen::MatrixXd& xs) {
  const int steps = static_cast<int>(xs.rows());
  const int hidden = static_cast<int>(gru.bz.size());
  Eigen::MatrixXd hs(steps, hidden);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd x = xs.row(t).transpose();
    const Eigen::VectorXd z =
        (gru.wz * x + gru.uz * h + gru.bz).unaryExpr(&Sigmoid);
    const Eigen::VectorXd r =
        (gru.wr * x + gru.ur * h + gru.br).unaryExpr(&Sigmoid);
    const Eigen::VectorXd c =
        (gru.wc * x + gru.uc * h.cwiseProduct(r) + gru.bc)
            .unaryExpr([](double v) { return std::tanh(v); });
    h = (Eigen::VectorXd::Ones(hidden) - z).cwiseProduct(h) +
        z.cwiseProduct(c);
    hs.row(t) = h.transpose();
  }
  return hs;
}

Eigen::VectorXd RefEncoderForward(const Eigen::MatrixXd& feats,
                                  const RefEncoderParams& params,
                                  RefEncoderCache* cache) {
  const int t_in = static_cast<int>(feats.rows());
  const int feat_dim = static_cast<int>(feats.cols());
  Require(t_in >= 4, "reference encoder needs at least 4 frames, got " +
                         std::to_string(t_in));

  RefEncoderCache local;
  RefEncoderCache& cc = cache ? *cache : local;
  cc.maps.clear();

  FeatureMap in;
  in.h = t_in;
  in.w = feat_dim;
  in.data.resize(1, t_in * feat_dim);
  for (int y = 0; y < t_in; ++y) {
    for (int x = 0; x < feat_dim; ++x) in.data(0, y * feat_dim + x) = feats(y, x);
  }
  cc.maps.push_back(std::move(in));

  for (size_t i = 0; i < params.conv.size(); ++i) {
    const Conv2dLayer& layer = params.conv[i];
    const FeatureMap& a = cc.maps.back();
    FeatureMap out;
    out.h = SameOutExtent(a.h, layer.stride);
    out.w = SameOutExtent(a.w, layer.stride);
    const Pad pad =
        SamePadding(a.h, a.w, layer.kernel, layer.stride, out.h, out.w);
    out.data = Eigen::MatrixXd::Zero(layer.out_ch, out.h * out.w);
    for (int oc = 0; oc < layer.out_ch; ++oc) {
      for (int oy = 0; oy < out.h; ++oy) {
        for (int ox = 0; ox < out.w; ++ox) {
          double acc = layer.b(oc);
          for (int ic = 0; ic < layer.in_ch; ++ic) {
            for (int ky = 0; ky < layer.kernel; ++ky) {
              const int iy = oy * layer.stride + ky - pad.top;
              if (iy < 0 || iy >= a.h) continue;
              for (int kx = 0; kx < layer.kernel; ++kx) {
                const int ix = ox * layer.stride + kx - pad.left;
                if (ix < 0 || ix >= a.w) continue;
                acc += layer.w(oc, (ic * layer.kernel + ky) * layer.kernel + kx) *
                       a.data(ic, iy * a.w + ix);
              }
            }
          }
          out.data(oc, oy * out.w + ox) = std::max(acc, 0.0);
        }
      }
    }
    Require(out.data.allFinite(),
            "numeric overflow in reference conv layer " + std::to_string(i));
    cc.maps.push_back(std::move(out));
  }

  // Flatten the surviving feature axis per time step for the GRU.
  const FeatureMap& top = cc.maps.back();
  const int steps = top.h;
  const int ch = static_cast<int>(top.data.rows());
  Require(ch * top.w == params.gru_input_dim,
          "feature width does not match the GRU input dimension");
  cc.xs.resize(steps, params.gru_input_dim);
  for (int t = 0; t < steps; ++t) {
    for (int c = 0; c < ch; ++c) {
      for (int x = 0; x < top.w; ++x) {
        cc.xs(t, c * top.w + x) = top.data(c, t * top.w + x);
      }
    }
  }

  const int hidden = params.hidden;
  cc.hs.resize(steps, hidden);
  cc.zs.resize(steps, hidden);
  cc.rs.resize(steps, hidden);
  cc.cs.resize(steps, hidden);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd x = cc.xs.row(t).transpose();
    const Eigen::VectorXd z =
        (params.gru.wz * x + params.gru.uz * h + params.gru.bz)
            .unaryExpr(&Sigmoid);
    const Eigen::VectorXd r =
        (params.gru.wr * x + params.gru.ur * h + params.gru.br)
            .unaryExpr(&Sigmoid);
    const Eigen::VectorXd c =
        (params.gru.wc * x + params.gru.uc * h.cwiseProduct(r) + params.gru.bc)
            .unaryExpr([](double v) { return std::tanh(v); });
    h = (Eigen::VectorXd::Ones(hidden) - z).cwiseProduct(h) +
        z.cwiseProduct(c);
    cc.zs.row(t) = z.transpose();
    cc.rs.row(t) = r.transpose();
    cc.cs.row(t) = c.transpose();
    cc.hs.row(t) = h.transpose();
  }
  Require(h.allFinite(), "numeric overflow in the GRU");
  return h;
}

RefEncoderGrads ZeroRefEncoderGrads(const RefEncoderParams& params) {
  RefEncoderGrads g;
  for (const Conv2dLayer& layer : params.conv) {
    g.conv_dw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    g.conv_db.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  const int hidden = params.hidden;
  const int input = params.gru_input_dim;
  g.dwz = Eigen::MatrixXd::Zero(hidden, input);
  g.dwr = Eigen::MatrixXd::Zero(hidden, input);
  g.dwc = Eigen::MatrixXd::Zero(hidden, input);
  g.duz = Eigen::MatrixXd::Zero(hidden, hidden);
  g.dur = Eigen::MatrixXd::Zero(hidden, hidden);
  g.duc = Eigen::MatrixXd::Zero(hidden, hidden);
  g.dbz = Eigen::VectorXd::Zero(hidden);
  g.dbr = Eigen::VectorXd::Zero(hidden);
  g.dbc = Eigen::VectorXd::Zero(hidden);
  return g;
}

void RefEncoderBackward(const RefEncoderParams& params,
                        const RefEncoderCache& cache,
                        const Eigen::VectorXd& d_ref, RefEncoderGrads* grads,
                        Eigen::MatrixXd* d_feats) {
  const int steps = static_cast<int>(cache.xs.rows());
  const int hidden = params.hidden;

  Eigen::MatrixXd d_xs = Eigen::MatrixXd::Zero(steps, params.gru_input_dim);
  Eigen::VectorXd dh = d_ref;
  for (int t = steps - 1; t >= 0; --t) {
    const Eigen::VectorXd x = cache.xs.row(t).transpose();
    const Eigen::VectorXd z = cache.zs.row(t).transpose();
    const Eigen::VectorXd r = cache.rs.row(t).transpose();
    const Eigen::VectorXd c = cache.cs.row(t).transpose();
    const Eigen::VectorXd h_prev =
        t > 0 ? Eigen::VectorXd(cache.hs.row(t - 1).transpose())
              : Eigen::VectorXd(Eigen::VectorXd::Zero(hidden));

    const Eigen::VectorXd dz = dh.cwiseProduct(c - h_prev);
    const Eigen::VectorXd dzp = dz.cwiseProduct(z).cwiseProduct(
        Eigen::VectorXd::Ones(hidden) - z);
    const Eigen::VectorXd dc = dh.cwiseProduct(z);
    const Eigen::VectorXd dcp = dc.cwiseProduct(
        Eigen::VectorXd::Ones(hidden) - c.cwiseProduct(c));
    Eigen::VectorXd dh_prev =
        dh.cwiseProduct(Eigen::VectorXd::Ones(hidden) - z);

    grads->dwc += dcp * x.transpose();
    grads->duc += dcp * (r.cwiseProduct(h_prev)).transpose();
    grads->dbc += dcp;
    const Eigen::VectorXd tmp = params.gru.uc.transpose() * dcp;
    const Eigen::VectorXd dr = tmp.cwiseProduct(h_prev);
    dh_prev += tmp.cwiseProduct(r);
    Eigen::VectorXd dx = params.gru.wc.transpose() * dcp;

    const Eigen::VectorXd drp = dr.cwiseProduct(r).cwiseProduct(
        Eigen::VectorXd::Ones(hidden) - r);
    grads->dwr += drp * x.transpose();
    grads->dur += drp * h_prev.transpose();
    grads->dbr += drp;
    dh_prev += params.gru.ur.transpose() * drp;
    dx += params.gru.wr.transpose() * drp;

    grads->dwz += dzp * x.transpose();
    grads->duz += dzp * h_prev.transpose();
    grads->dbz += dzp;
    dh_prev += params.gru.uz.transpose() * dzp;
    dx += params.gru.wz.transpose() * dzp;

    d_xs.row(t) = dx.transpose();
    dh = dh_prev;
  }

  // Unflatten GRU input gradients onto the top feature map.
  const FeatureMap& top = cache.maps.back();
  const int top_ch = static_cast<int>(top.data.rows());
  Eigen::MatrixXd d_map =
      Eigen::MatrixXd::Zero(top_ch, top.h * top.w);
  for (int t = 0; t < top.h; ++t) {
    for (int c = 0; c < top_ch; ++c) {
      for (int x = 0; x < top.w; ++x) {
        d_map(c, t * top.w + x) = d_xs(t, c * top.w + x);
      }
    }
  }

  for (int i = static_cast<int>(params.conv.size()) - 1; i >= 0; --i) {
    const Conv2dLayer& layer = params.conv[i];
    const FeatureMap& a = cache.maps[i];
    const FeatureMap& y = cache.maps[i + 1];
    const Pad pad = SamePadding(a.h, a.w, layer.kernel, layer.stride, y.h, y.w);

    // ReLU mask on this layer's output.
    d_map = d_map.cwiseProduct((y.data.array() > 0.0).cast<double>().matrix());

    Eigen::MatrixXd d_prev = Eigen::MatrixXd::Zero(layer.in_ch, a.h * a.w);
    for (int oc = 0; oc < layer.out_ch; ++oc) {
      for (int oy = 0; oy < y.h; ++oy) {
        for (int ox = 0; ox < y.w; ++ox) {
          const double g = d_map(oc, oy * y.w + ox);
          if (g == 0.0) continue;
          grads->conv_db[i](oc) += g;
          for (int ic = 0; ic < layer.in_ch; ++ic) {
            for (int ky = 0; ky < layer.kernel; ++ky) {
              const int iy = oy * layer.stride + ky - pad.top;
              if (iy < 0 || iy >= a.h) continue;
              for (int kx = 0; kx < layer.kernel; ++kx) {
                const int ix = ox * layer.stride + kx - pad.left;
                if (ix < 0 || ix >= a.w) continue;
                const int widx = (ic * layer.kernel + ky) * layer.kernel + kx;
                grads->conv_dw[i](oc, widx) += g * a.data(ic, iy * a.w + ix);
                d_prev(ic, iy * a.w + ix) += g * layer.w(oc, widx);
              }
            }
          }
        }
      }
    }
    d_map = std::move(d_prev);
  }

  if (d_feats != nullptr) {
    const FeatureMap& in = cache.maps.front();
    d_feats->resize(in.h, in.w);
    for (int y = 0; y < in.h; ++y) {
      for (int x = 0; x < in.w; ++x) {
        (*d_feats)(y, x) = d_map(0, y * in.w + x);
      }
    }
  }
}

}  // namespace deeptalk
