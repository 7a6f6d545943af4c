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

#ifndef DEEPTALK_TRAINER_CHECKPOINT_H_
#define DEEPTALK_TRAINER_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "deeptalk/style/embedder.h"
#include "deeptalk/trainer/optimizer.h"

namespace deeptalk {

// Training counters carried inside a checkpoint. Random streams are derived
// from (seed, epoch, step), so these counters are the complete RNG state.
struct TrainState {
  uint32_t epoch = 0;
  uint32_t step = 0;
  uint64_t seed = 0;
};

// Checkpoint file layout: a UTF-8 manifest block with one line per tensor
// ("name dtype dim0 dim1 ..."), a blank line, then the raw little-endian
// payload. All dtypes are 4 bytes wide: f32 for parameters and optimizer
// moments, u32 for architecture metadata and counters. The payload length
// must equal the sum of shape products times 4.
void SaveCheckpoint(const std::string& path, EmbedderModel* model,
                    const AdamState* adam, const TrainState& state);

struct LoadedCheckpoint {
  EmbedderModel model;
  bool has_adam = false;
  AdamState adam;
  TrainState state;
};

// Validates the manifest against the payload and the reconstructed model
// before exposing any parameter; corrupt files are rejected wholesale.
LoadedCheckpoint LoadCheckpoint(const std::string& path);

}  // namespace deeptalk

#endif  // DEEPTALK_TRAINER_CHECKPOINT_H_
