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

#ifndef DEEPTALK_FRONTEND_FRAMING_H_
#define DEEPTALK_FRONTEND_FRAMING_H_

#include <Eigen/Core>

#include "deeptalk/audio/waveform.h"

namespace deeptalk {

// 25 ms windows with a 10 ms hop at the fixed 8 kHz rate.
struct FramingConfig {
  int window = 200;
  int hop = 80;
};

// Frame count for a signal of n samples: floor((n - window) / hop) + 1.
int NumFrames(int n_samples, const FramingConfig& cfg);

// Cuts the signal into overlapping frames, one row per frame. Frame t covers
// samples [t*hop, t*hop + window). No window function is applied; the learned
// filters subsume it.
Eigen::MatrixXd FrameSignal(const Waveform& w, const FramingConfig& cfg);

}  // namespace deeptalk

#endif  // DEEPTALK_FRONTEND_FRAMING_H_
