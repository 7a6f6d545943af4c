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

#ifndef DEEPTALK_AUDIO_WAVEFORM_H_
#define DEEPTALK_AUDIO_WAVEFORM_H_

#include <cstdint>
#include <string>
#include <vector>

namespace deeptalk {

// The toolkit operates at a single fixed rate.
inline constexpr int kSampleRate = 8000;

// Mono PCM audio, samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
  std::string source_id;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Mean square of the samples.
double MeanPower(const Waveform& w);

// Cuts consecutive non-overlapping chunks of chunk_seconds each; a trailing
// remainder shorter than one chunk is dropped. Returns an empty list for
// input shorter than one chunk.
std::vector<Waveform> SplitIntoChunks(const Waveform& w,
                                      double chunk_seconds = 5.0);

// Adds noise scaled so that 10*log10(P_signal / P_scaled_noise) == snr_db,
// with powers measured as mean square over the whole chunk. The noise is
// cropped from a seeded random offset and must be at least as long as the
// signal. The output is not renormalized.
Waveform MixNoiseAtSnr(const Waveform& signal, const Waveform& noise,
                       double snr_db, uint64_t seed);

}  // namespace deeptalk

#endif  // DEEPTALK_AUDIO_WAVEFORM_H_
