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

#ifndef DEEPTALK_VERIFICATION_FUSION_H_
#define DEEPTALK_VERIFICATION_FUSION_H_

#include "deeptalk/verification/trials.h"

namespace deeptalk {

// Shifts and scales every score to zero mean and unit variance over the
// whole set. Needs at least 2 distinct scores.
ScoreSet ZNorm(const ScoreSet& scores);

// Per-trial weighted mean (w_a * a + w_b * b) / (w_a + w_b) over two score
// sets covering the same trials with the same labels. Scores are fused as
// given; z-normalize first when the systems' scales differ. The result's
// system id is "fused".
ScoreSet Fuse(const ScoreSet& a, const ScoreSet& b, double w_a, double w_b);

}  // namespace deeptalk

#endif  // DEEPTALK_VERIFICATION_FUSION_H_
