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

#ifndef DEEPTALK_ANALYSIS_PITCH_H_
#define DEEPTALK_ANALYSIS_PITCH_H_

#include <string>
#include <vector>

#include "deeptalk/audio/waveform.h"

namespace deeptalk {

struct F0Frame {
  double f0 = 0.0;  // Hz; 0 when unvoiced
  bool voiced = false;
  double periodicity = 0.0;  // normalized autocorrelation peak, [0, 1]
};

struct F0Contour {
  std::vector<F0Frame> frames;
  double frame_rate = 100.0;  // frames per second
};

// Per-frame fundamental frequency over 40 ms windows with a 10 ms hop.
// Normalized autocorrelation peak search over 50-400 Hz; a frame is voiced
// when its peak periodicity reaches 0.5 and its mean-square energy 1e-6.
// Waveforms shorter than one window yield an empty contour.
F0Contour EstimateF0(const Waveform& w);

struct F0Similarity {
  double pearson_r = 0.0;      // over mutually voiced frames
  double voiced_overlap = 0.0;  // mutually voiced / union voiced
};

// Compares two contours cropped to the shorter length. Needs at least 4
// mutually voiced frames. Two exactly flat contours correlate at 1, one
// flat against one varying at 0.
F0Similarity CompareF0(const F0Contour& a, const F0Contour& b);

// Header frame/f0/voiced/periodicity, one row per frame.
void WriteF0Tsv(const std::string& path, const F0Contour& c);

}  // namespace deeptalk

#endif  // DEEPTALK_ANALYSIS_PITCH_H_
