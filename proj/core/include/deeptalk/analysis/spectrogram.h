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

#ifndef DEEPTALK_ANALYSIS_SPECTROGRAM_H_
#define DEEPTALK_ANALYSIS_SPECTROGRAM_H_

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/analysis/pitch.h"
#include "deeptalk/audio/waveform.h"

namespace deeptalk {

// In-place iterative radix-2 transform; the length must be a power of two.
void Fft(std::vector<std::complex<double>>* x);

// Hann-windowed short-time magnitudes, frames x (nfft/2 + 1), linear scale.
// Frames are 200 samples with an 80-sample hop, zero-padded to nfft.
Eigen::MatrixXd StftMagnitude(const Waveform& w, int nfft = 256);

struct Spectrogram {
  Eigen::MatrixXd db;  // frames x bins, floored at -80 dB
  double frame_rate = 100.0;
  double bin_hz = 31.25;
};

// dB-scale spectrogram of a waveform holding at least one 200-sample window.
Spectrogram ComputeSpectrogram(const Waveform& w);

// Header bin columns are implicit: row = frame index then one dB value per
// bin, low frequency first.
void WriteSpectrogramTsv(const std::string& path, const Spectrogram& s);

// Binary PPM heat map, time left to right and low frequency at the bottom,
// with the voiced F0 trajectory overlaid in red when a contour is given.
void RenderSpectrogramPpm(const std::string& path, const Spectrogram& s,
                          const F0Contour* f0);

}  // namespace deeptalk

#endif  // DEEPTALK_ANALYSIS_SPECTROGRAM_H_
