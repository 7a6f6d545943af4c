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

#ifndef DEEPTALK_AUDIO_WAV_IO_H_
#define DEEPTALK_AUDIO_WAV_IO_H_

#include <string>

#include "deeptalk/audio/waveform.h"

namespace deeptalk {

// Reads RIFF 16-bit signed little-endian PCM, mono, 8000 Hz. Any other
// sample rate, channel count, bit depth, or encoding is rejected with a
// diagnostic naming the offending property. Samples are rescaled to
// [-1, 1] by dividing by 32768.
Waveform LoadWav(const std::string& path);

// Writes the matching format. Samples are clipped to [-1, 1] first.
void SaveWav(const std::string& path, const Waveform& w);

}  // namespace deeptalk

#endif  // DEEPTALK_AUDIO_WAV_IO_H_
