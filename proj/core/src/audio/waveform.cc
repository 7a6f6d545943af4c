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

#include "deeptalk/audio/waveform.h"

#include <cmath>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

double MeanPower(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : w.samples) acc += s * s;
  return acc / static_cast<double>(w.samples.size());
}

std::vector<Waveform> SplitIntoChunks(const Waveform& w, double chunk_seconds) {
  Require(chunk_seconds > 0.0, "chunk_seconds must be positive");
  const size_t chunk_len =
      static_cast<size_t>(std::llround(chunk_seconds * w.sample_rate));
  Require(chunk_len > 0, "chunk_seconds too small for one sample");
  std::vector<Waveform> chunks;
  const size_t n_chunks = w.samples.size() / chunk_len;
  chunks.reserve(n_chunks);
  for (size_t k = 0; k < n_chunks; ++k) {
    Waveform c;
    c.sample_rate = w.sample_rate;
    c.source_id = w.source_id + "#" + std::to_string(k);
    c.samples.assign(w.samples.begin() + k * chunk_len,
                     w.samples.begin() + (k + 1) * chunk_len);
    chunks.push_back(std::move(c));
  }
  return chunks;
}

Waveform MixNoiseAtSnr(const Waveform& signal, const Waveform& noise,
                       double snr_db, uint64_t seed) {
  Require(noise.samples.size() >= signal.samples.size(),
          "noise shorter than signal");
  Rng rng(seed);
  const size_t max_offset = noise.samples.size() - signal.samples.size();
  const size_t offset =
      max_offset == 0
          ? 0
          : static_cast<size_t>(rng.UniformInt(
                static_cast<int64_t>(max_offset) + 1));

  Waveform cropped;
  cropped.samples.assign(noise.samples.begin() + offset,
                         noise.samples.begin() + offset +
                             signal.samples.size());

  const double p_signal = MeanPower(signal);
  const double p_noise = MeanPower(cropped);
  Require(p_signal > 0.0 && p_noise > 0.0, "degenerate power");

  // g^2 * p_noise == p_signal / 10^(snr/10)
  const double gain =
      std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));

  Waveform out;
  out.sample_rate = signal.sample_rate;
  out.source_id = signal.source_id;
  out.samples.resize(signal.samples.size());
  for (size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = signal.samples[i] + gain * cropped.samples[i];
  }
  return out;
}

}  // namespace deeptalk
