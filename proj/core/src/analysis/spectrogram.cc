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

#include "deeptalk/analysis/spectrogram.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"
#include "deeptalk/frontend/framing.h"

namespace deeptalk {

namespace {

constexpr double kDbFloor = -80.0;

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  }
  return w;
}

}  // namespace

void Fft(std::vector<std::complex<double>>* x) {
  const size_t n = x->size();
  Require(n >= 1 && (n & (n - 1)) == 0,
          "transform length must be a power of two, got " +
              std::to_string(n));
  std::vector<std::complex<double>>& a = *x;

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> step(std::cos(angle), std::sin(angle));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

Eigen::MatrixXd StftMagnitude(const Waveform& w, int nfft) {
  const FramingConfig framing;
  Require(nfft >= framing.window && (nfft & (nfft - 1)) == 0,
          "transform size must be a power of two covering one window");
  Require(w.sample_rate == kSampleRate,
          "unsupported sample rate " + std::to_string(w.sample_rate));
  const Eigen::MatrixXd frames = FrameSignal(w, framing);
  const std::vector<double> hann = HannWindow(framing.window);

  const int n_bins = nfft / 2 + 1;
  Eigen::MatrixXd mag(frames.rows(), n_bins);
  std::vector<std::complex<double>> buf(nfft);
  for (int f = 0; f < frames.rows(); ++f) {
    for (int i = 0; i < framing.window; ++i) {
      buf[i] = frames(f, i) * hann[i];
    }
    std::fill(buf.begin() + framing.window, buf.end(),
              std::complex<double>(0.0, 0.0));
    Fft(&buf);
    for (int k = 0; k < n_bins; ++k) {
      mag(f, k) = std::abs(buf[k]);
    }
  }
  return mag;
}

Spectrogram ComputeSpectrogram(const Waveform& w) {
  const int nfft = 256;
  Spectrogram s;
  s.frame_rate = static_cast<double>(kSampleRate) / FramingConfig().hop;
  s.bin_hz = static_cast<double>(kSampleRate) / nfft;
  const Eigen::MatrixXd mag = StftMagnitude(w, nfft);
  s.db = mag.unaryExpr([](double m) {
    return std::max(20.0 * std::log10(std::max(m, 1e-12)), kDbFloor);
  });
  return s;
}

void WriteSpectrogramTsv(const std::string& path, const Spectrogram& s) {
  std::string out;
  for (int f = 0; f < s.db.rows(); ++f) {
    out += std::to_string(f);
    for (int k = 0; k < s.db.cols(); ++k) {
      out += "\t" + FormatReal(s.db(f, k));
    }
    out += "\n";
  }
  WriteTextFile(path, out);
}

void RenderSpectrogramPpm(const std::string& path, const Spectrogram& s,
                          const F0Contour* f0) {
  const int width = static_cast<int>(s.db.rows());
  const int height = static_cast<int>(s.db.cols());
  Require(width >= 1 && height >= 1, "empty spectrogram");

  const double hi = s.db.maxCoeff();
  const double span = std::max(hi - kDbFloor, 1e-9);

  std::string pixels(static_cast<size_t>(width) * height * 3, '\0');
  auto put = [&](int x, int y, int r, int g, int b) {
    const size_t at = 3 * (static_cast<size_t>(y) * width + x);
    pixels[at] = static_cast<char>(r);
    pixels[at + 1] = static_cast<char>(g);
    pixels[at + 2] = static_cast<char>(b);
  };
  for (int x = 0; x < width; ++x) {
    for (int k = 0; k < height; ++k) {
      const double t = (s.db(x, k) - kDbFloor) / span;
      // Dark blue through red to yellow-white.
      const int r = static_cast<int>(std::clamp(t * 2.0, 0.0, 1.0) * 255);
      const int g = static_cast<int>(std::clamp(t * 2.0 - 1.0, 0.0, 1.0) * 255);
      const int b = static_cast<int>(std::clamp(0.35 - t, 0.0, 0.35) / 0.35 * 160);
      put(x, height - 1 - k, r, g, b);
    }
  }
  if (f0 != nullptr) {
    const int n = std::min(width, static_cast<int>(f0->frames.size()));
    for (int x = 0; x < n; ++x) {
      if (!f0->frames[x].voiced) continue;
      const int k = static_cast<int>(std::lround(f0->frames[x].f0 / s.bin_hz));
      if (k < 0 || k >= height) continue;
      put(x, height - 1 - k, 255, 0, 0);
      if (k + 1 < height) put(x, height - 2 - k, 255, 0, 0);
    }
  }

  std::string out = "P6\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n255\n" + pixels;
  WriteTextFile(path, out);
}

}  // namespace deeptalk
