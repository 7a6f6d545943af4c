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

#ifndef DEEPTALK_TRAINER_TRIPLET_H_
#define DEEPTALK_TRAINER_TRIPLET_H_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/common/rng.h"

namespace deeptalk {

// Cosine distance between unit-norm vectors: 1 - a.b.
double CosineDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Hinge loss max(0, d(a,p) - d(a,n) + margin) on unit-norm embeddings.
double TripletLoss(const Eigen::VectorXd& anchor, const Eigen::VectorXd& pos,
                   const Eigen::VectorXd& neg, double margin);

// Indices into a caller-owned utterance list. The anchor and positive share
// a speaker and differ as utterances; the negative is another speaker.
struct TripletIdx {
  int anchor = 0;
  int positive = 0;
  int negative = 0;
};

// Draws batch triplets under the speaker constraints. Random mining draws
// negatives uniformly from other speakers. Semi-hard mining draws a shared
// pool of negative_pool candidates and, per pair, keeps the hardest negative
// inside the band d(a,p) < d(a,n) < d(a,p) + margin, falling back to the
// hardest candidate when the band is empty; embed returns the current
// model's embedding for an utterance index and is only called for semi-hard
// mining. Deterministic given the rng state.
std::vector<TripletIdx> SampleTriplets(
    const std::vector<std::string>& speaker_of_utt, int batch,
    const std::string& mining, double margin, int negative_pool, Rng* rng,
    const std::function<Eigen::VectorXd(int)>& embed);

}  // namespace deeptalk

#endif  // DEEPTALK_TRAINER_TRIPLET_H_
