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

#ifndef DEEPTALK_AUDIO_SYNTH_H_
#define DEEPTALK_AUDIO_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>

#include "deeptalk/audio/waveform.h"
#include "deeptalk/common/rng.h"

namespace deeptalk {

struct F0ContourSpec {
  double declination_slope = 0.0;  // Hz per second
  double vibrato_rate = 0.0;       // Hz
  double vibrato_depth = 0.0;      // Hz
};

// Control parameters of one synthetic speaker: a glottal pulse train with a
// programmed F0 trajectory, shaped by three formant resonators.
struct SyntheticSpeakerSpec {
  std::string speaker_id;
  double base_f0 = 160.0;  // Hz, must lie in [80, 300]
  F0ContourSpec contour;
  std::array<double, 3> formant_hz = {500.0, 1500.0, 2500.0};
  std::array<double, 3> formant_bw_hz = {80.0, 100.0, 120.0};
  double jitter = 0.0;       // fractional period perturbation, in [0, 0.05]
  double noise_floor = 0.0;  // linear gain of additive white noise
};

void ValidateSpeakerSpec(const SyntheticSpeakerSpec& spec);

// Instantaneous F0 in Hz at time t seconds.
double ProgrammedF0(const SyntheticSpeakerSpec& spec, double t);

// Renders duration_seconds of speech-like audio for the given speaker.
// Deterministic per (spec, duration, seed). Peak normalized to 0.9.
// Fails if the programmed F0 leaves [50, 400] Hz anywhere in the utterance.
Waveform SynthUtterance(const SyntheticSpeakerSpec& spec,
                        double duration_seconds, uint64_t seed);

// Gaussian white noise, peak normalized to 0.9.
Waveform WhiteNoise(double duration_seconds, uint64_t seed);

// Multi-talker hum: six synthetic utterances summed, peak normalized to 0.9.
Waveform BabbleNoise(double duration_seconds, uint64_t seed);

// Draws a speaker spec from seeded ranges chosen so that the programmed F0
// stays inside [50, 400] Hz for any legal utterance duration.
SyntheticSpeakerSpec DrawSpeakerSpec(const std::string& speaker_id, Rng* rng);

}  // namespace deeptalk

#endif  // DEEPTALK_AUDIO_SYNTH_H_
