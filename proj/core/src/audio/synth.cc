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

#include "deeptalk/audio/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

namespace {

constexpr double kPi = std::numbers::pi;

// Two-pole resonator with unity DC gain, applied in place.
void Resonate(std::vector<double>* x, double center_hz, double bw_hz) {
  const double r = std::exp(-kPi * bw_hz / kSampleRate);
  const double b = 2.0 * r * std::cos(2.0 * kPi * center_hz / kSampleRate);
  const double c = -r * r;
  const double a = 1.0 - b - c;
  double y1 = 0.0;
  double y2 = 0.0;
  for (double& v : *x) {
    const double y = a * v + b * y1 + c * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

void PeakNormalize(std::vector<double>* x, double target) {
  double peak = 0.0;
  for (double v : *x) peak = std::max(peak, std::abs(v));
  Require(peak > 0.0, "cannot normalize an all-zero signal");
  const double scale = target / peak;
  for (double& v : *x) v *= scale;
}

}  // namespace

void ValidateSpeakerSpec(const SyntheticSpeakerSpec& spec) {
  Require(spec.base_f0 >= 80.0 && spec.base_f0 <= 300.0,
          "base_f0 out of range [80, 300]: " + FormatReal(spec.base_f0));
  for (double f : spec.formant_hz) {
    Require(f > 0.0 && f < 4000.0,
            "formant center must lie in (0, 4000) Hz: " + FormatReal(f));
  }
  for (double bw : spec.formant_bw_hz) {
    Require(bw > 0.0, "formant bandwidth must be positive");
  }
  Require(spec.jitter >= 0.0 && spec.jitter <= 0.05,
          "jitter out of range [0, 0.05]: " + FormatReal(spec.jitter));
  Require(spec.noise_floor >= 0.0, "noise_floor must be non-negative");
  Require(spec.contour.vibrato_rate >= 0.0, "vibrato_rate must be >= 0");
  Require(spec.contour.vibrato_depth >= 0.0, "vibrato_depth must be >= 0");
}

double ProgrammedF0(const SyntheticSpeakerSpec& spec, double t) {
  return spec.base_f0 + spec.contour.declination_slope * t +
         spec.contour.vibrato_depth *
             std::sin(2.0 * kPi * spec.contour.vibrato_rate * t);
}

Waveform SynthUtterance(const SyntheticSpeakerSpec& spec,
                        double duration_seconds, uint64_t seed) {
  ValidateSpeakerSpec(spec);
  Require(duration_seconds >= 1.0 && duration_seconds <= 10.0,
          "utterance duration must lie in [1, 10] seconds");
  const int n = static_cast<int>(std::llround(duration_seconds * kSampleRate));

  std::vector<double> f0(n);
  for (int t = 0; t < n; ++t) {
    f0[t] = ProgrammedF0(spec, static_cast<double>(t) / kSampleRate);
    Require(f0[t] >= 50.0 && f0[t] <= 400.0,
            "programmed f0 leaves [50, 400] Hz for speaker " + spec.speaker_id +
                ": " + FormatReal(f0[t]) + " Hz at sample " + std::to_string(t));
  }

  Rng jitter_rng(DeriveSeed(seed, 1));
  Rng noise_rng(DeriveSeed(seed, 2));

  // Pulse train: a phase accumulator fires one impulse per period; the
  // impulse is split between the two samples around its fractional position.
  std::vector<double> x(n, 0.0);
  double period_scale = 1.0;
  double phase = 1.0 - f0[0] / kSampleRate;
  for (int t = 0; t < n; ++t) {
    const double inc = f0[t] / (kSampleRate * period_scale);
    phase += inc;
    if (phase >= 1.0) {
      phase -= 1.0;
      const double pos = static_cast<double>(t) - phase / inc;
      const int i0 = static_cast<int>(std::floor(pos));
      const double w1 = pos - i0;
      if (i0 >= 0 && i0 < n) x[i0] += 1.0 - w1;
      if (i0 + 1 >= 0 && i0 + 1 < n) x[i0 + 1] += w1;
      if (spec.jitter > 0.0) {
        period_scale = std::clamp(1.0 + spec.jitter * jitter_rng.Gaussian(),
                                  0.7, 1.3);
      }
    }
  }

  // Glottal-like spectral tilt ahead of the formant filters. A flat impulse
  // train lets a single formant-boosted harmonic dominate the waveform,
  // which no longer resembles voiced speech and defeats period estimation.
  Resonate(&x, 180.0, 280.0);
  for (int k = 0; k < 3; ++k) {
    Resonate(&x, spec.formant_hz[k], spec.formant_bw_hz[k]);
  }
  if (spec.noise_floor > 0.0) {
    for (double& v : x) v += spec.noise_floor * noise_rng.Gaussian();
  }
  PeakNormalize(&x, 0.9);

  Waveform w;
  w.samples = std::move(x);
  w.source_id = spec.speaker_id;
  return w;
}

Waveform WhiteNoise(double duration_seconds, uint64_t seed) {
  Require(duration_seconds > 0.0, "noise duration must be positive");
  const int n = static_cast<int>(std::llround(duration_seconds * kSampleRate));
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.Gaussian();
  PeakNormalize(&x, 0.9);
  Waveform w;
  w.samples = std::move(x);
  w.source_id = "white_noise";
  return w;
}

Waveform BabbleNoise(double duration_seconds, uint64_t seed) {
  Require(duration_seconds >= 1.0 && duration_seconds <= 10.0,
          "babble duration must lie in [1, 10] seconds");
  const int n = static_cast<int>(std::llround(duration_seconds * kSampleRate));
  std::vector<double> acc(n, 0.0);
  for (int k = 0; k < 6; ++k) {
    Rng spec_rng(DeriveSeed(seed, 10 + k));
    SyntheticSpeakerSpec spec =
        DrawSpeakerSpec("babble" + std::to_string(k), &spec_rng);
    const Waveform talker =
        SynthUtterance(spec, duration_seconds, DeriveSeed(seed, 20 + k));
    for (int t = 0; t < n; ++t) acc[t] += talker.samples[t];
  }
  PeakNormalize(&acc, 0.9);
  Waveform w;
  w.samples = std::move(acc);
  w.source_id = "babble_noise";
  return w;
}

SyntheticSpeakerSpec DrawSpeakerSpec(const std::string& speaker_id, Rng* rng) {
  SyntheticSpeakerSpec spec;
  spec.speaker_id = speaker_id;
  // base_f0 range keeps base +- (10 s * |slope| + depth) inside [50, 400].
  spec.base_f0 = rng->Uniform(110.0, 260.0);
  spec.contour.declination_slope = rng->Uniform(-4.0, 4.0);
  spec.contour.vibrato_rate = rng->Uniform(3.5, 6.5);
  spec.contour.vibrato_depth = rng->Uniform(3.0, 15.0);
  spec.formant_hz[0] = rng->Uniform(320.0, 900.0);
  spec.formant_hz[1] = rng->Uniform(1050.0, 2150.0);
  spec.formant_hz[2] = rng->Uniform(2300.0, 3400.0);
  for (int k = 0; k < 3; ++k) {
    spec.formant_bw_hz[k] = rng->Uniform(60.0, 140.0);
  }
  spec.jitter = rng->Uniform(0.002, 0.02);
  spec.noise_floor = rng->Uniform(0.002, 0.01);
  return spec;
}

}  // namespace deeptalk
