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

#include "deeptalk/analysis/pitch.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

namespace {

constexpr int kWindow = 320;  // 40 ms at 8 kHz
constexpr int kHop = 80;      // 10 ms
constexpr int kMinLag = 20;   // 400 Hz
constexpr int kMaxLag = 160;  // 50 Hz
constexpr double kMinF0 = 50.0;
constexpr double kMaxF0 = 400.0;
constexpr double kVoicedPeriodicity = 0.5;
constexpr double kVoicedEnergy = 1e-6;

F0Frame AnalyzeFrame(const double* x) {
  F0Frame out;
  double energy = 0.0;
  for (int t = 0; t < kWindow; ++t) energy += x[t] * x[t];
  if (energy / kWindow < kVoicedEnergy) return out;

  // Normalized autocorrelation over one extra lag on each side so peaks at
  // the range edges still have neighbors for refinement.
  std::vector<double> r(kMaxLag + 2, 0.0);
  for (int lag = kMinLag - 1; lag <= kMaxLag + 1; ++lag) {
    double cross = 0.0;
    double head = 0.0;
    double tail = 0.0;
    const int len = kWindow - lag;
    for (int t = 0; t < len; ++t) {
      cross += x[t] * x[t + lag];
      head += x[t] * x[t];
      tail += x[t + lag] * x[t + lag];
    }
    const double denom = std::sqrt(head * tail);
    r[lag] = denom > 0.0 ? cross / denom : 0.0;
  }

  int lag_star = kMinLag;
  for (int lag = kMinLag + 1; lag <= kMaxLag; ++lag) {
    if (r[lag] > r[lag_star]) lag_star = lag;
  }

  // The global peak can land on a multiple of the true period: frequency
  // modulation and formant ring-down can make two-period alignment score
  // above one-period alignment. Only integer divisors of the peak lag are
  // period candidates. A divisor is accepted when it holds a local maximum
  // that is strong both in absolute terms and relative to the global peak;
  // the absolute bar keeps weak even-harmonic peaks at half the period from
  // doubling the estimate.
  const double floor_r = std::max(0.75 * r[lag_star], 0.70);
  int chosen = lag_star;
  for (int k = 2; k <= 8; ++k) {
    const int center =
        static_cast<int>(std::lround(static_cast<double>(lag_star) / k));
    if (center < kMinLag) break;
    const int lo = std::max(center - 3, kMinLag);
    const int hi = std::min(center + 3, kMaxLag);
    for (int lag = lo; lag <= hi; ++lag) {
      if (r[lag] >= floor_r && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] &&
          lag < chosen) {
        chosen = lag;
      }
    }
  }
  lag_star = chosen;

  const double alpha = r[lag_star - 1];
  const double beta = r[lag_star];
  const double gamma = r[lag_star + 1];
  const double denom = alpha - 2.0 * beta + gamma;
  double delta = denom != 0.0 ? 0.5 * (alpha - gamma) / denom : 0.0;
  delta = std::clamp(delta, -0.5, 0.5);

  out.periodicity = std::clamp(beta, 0.0, 1.0);
  out.voiced = out.periodicity >= kVoicedPeriodicity;
  if (out.voiced) {
    out.f0 = std::clamp(static_cast<double>(kSampleRate) / (lag_star + delta),
                        kMinF0, kMaxF0);
  }
  return out;
}

}  // namespace

F0Contour EstimateF0(const Waveform& w) {
  Require(w.sample_rate == kSampleRate,
          "unsupported sample rate " + std::to_string(w.sample_rate));
  F0Contour c;
  c.frame_rate = static_cast<double>(kSampleRate) / kHop;
  const int n = static_cast<int>(w.samples.size());
  if (n < kWindow) return c;
  const int n_frames = (n - kWindow) / kHop + 1;
  c.frames.reserve(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    c.frames.push_back(AnalyzeFrame(w.samples.data() + f * kHop));
  }
  return c;
}

F0Similarity CompareF0(const F0Contour& a, const F0Contour& b) {
  const size_t n = std::min(a.frames.size(), b.frames.size());
  std::vector<double> fa;
  std::vector<double> fb;
  size_t n_union = 0;
  for (size_t i = 0; i < n; ++i) {
    const bool va = a.frames[i].voiced;
    const bool vb = b.frames[i].voiced;
    if (va || vb) ++n_union;
    if (va && vb) {
      fa.push_back(a.frames[i].f0);
      fb.push_back(b.frames[i].f0);
    }
  }
  Require(fa.size() >= 4, "insufficient voiced overlap: " +
                              std::to_string(fa.size()) +
                              " mutually voiced frames");

  F0Similarity out;
  out.voiced_overlap =
      static_cast<double>(fa.size()) / static_cast<double>(n_union);

  const double m = static_cast<double>(fa.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (size_t i = 0; i < fa.size(); ++i) {
    mean_a += fa[i];
    mean_b += fb[i];
  }
  mean_a /= m;
  mean_b /= m;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov = 0.0;
  for (size_t i = 0; i < fa.size(); ++i) {
    const double da = fa[i] - mean_a;
    const double db = fb[i] - mean_b;
    var_a += da * da;
    var_b += db * db;
    cov += da * db;
  }
  const bool flat_a = var_a == 0.0;
  const bool flat_b = var_b == 0.0;
  if (flat_a && flat_b) {
    out.pearson_r = 1.0;
  } else if (flat_a || flat_b) {
    out.pearson_r = 0.0;
  } else {
    out.pearson_r = std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
  }
  return out;
}

void WriteF0Tsv(const std::string& path, const F0Contour& c) {
  std::string out = "frame\tf0\tvoiced\tperiodicity\n";
  for (size_t i = 0; i < c.frames.size(); ++i) {
    const F0Frame& f = c.frames[i];
    out += std::to_string(i) + "\t" + FormatReal(f.f0) + "\t" +
           (f.voiced ? "1" : "0") + "\t" + FormatReal(f.periodicity) + "\n";
  }
  WriteTextFile(path, out);
}

}  // namespace deeptalk
