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

#include "deeptalk/frontend/framing.h"

#include "deeptalk/common/require.h"

namespace deeptalk {

int NumFrames(int n_samples, const FramingConfig& cfg) {
  Require(cfg.hop > 0 && cfg.hop <= cfg.window,
          "framing requires 0 < hop <= window");
  if (n_samples < cfg.window) return 0;
  return (n_samples - cfg.window) / cfg.hop + 1;
}

Eigen::MatrixXd FrameSignal(const Waveform& w, const FramingConfig& cfg) {
  const int n = static_cast<int>(w.samples.size());
  const int t_count = NumFrames(n, cfg);
  Require(t_count >= 1, "input shorter than one frame: " + std::to_string(n) +
                            " samples < window " + std::to_string(cfg.window));
  Eigen::MatrixXd frames(t_count, cfg.window);
  for (int t = 0; t < t_count; ++t) {
    for (int i = 0; i < cfg.window; ++i) {
      frames(t, i) = w.samples[t * cfg.hop + i];
    }
  }
  return frames;
}

}  // namespace deeptalk
