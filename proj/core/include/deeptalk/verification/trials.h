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

#ifndef DEEPTALK_VERIFICATION_TRIALS_H_
#define DEEPTALK_VERIFICATION_TRIALS_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace deeptalk {

// One enroll/test comparison; the utterances must differ.
struct Trial {
  std::string enroll_utt;
  std::string test_utt;
  bool genuine = false;
};

struct ScoredTrial {
  Trial trial;
  double score = 0.0;
};

struct ScoreSet {
  std::string system_id;
  std::vector<ScoredTrial> trials;
};

struct TrialUtt {
  std::string utt_id;
  std::string speaker_id;
};

// All same-speaker pairs as genuine trials plus an equal-count sample of
// cross-speaker pairs, drawn without replacement from the given seed.
std::vector<Trial> MakeTrials(const std::vector<TrialUtt>& utts,
                              uint64_t seed);

// Trial file: header enroll_utt/test_utt/label, labels tgt and non.
void WriteTrials(const std::string& path, const std::vector<Trial>& trials);
std::vector<Trial> ReadTrials(const std::string& path);

// Score file: header enroll_utt/test_utt/score/system_id. Labels live in the
// trial file, so reading joins rows against it; every listed system must
// score every trial exactly once. Systems keep first-appearance order.
void WriteScores(const std::string& path,
                 const std::vector<ScoreSet>& sets);
std::vector<ScoreSet> ReadScoreSets(const std::string& path,
                                    const std::vector<Trial>& trials);

// Embedding table: one row per utterance, id then the vector values, no
// header. All rows must share one dimension.
void WriteEmbeddings(
    const std::string& path,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows);
std::vector<std::pair<std::string, Eigen::VectorXd>> ReadEmbeddings(
    const std::string& path);
std::map<std::string, Eigen::VectorXd> ToEmbeddingMap(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows);

// Cosine similarity in [-1, 1]; rejects zero-norm inputs.
double CosineScore(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

ScoreSet ScoreTrials(const std::vector<Trial>& trials,
                     const std::map<std::string, Eigen::VectorXd>& embeddings,
                     const std::string& system_id);

}  // namespace deeptalk

#endif  // DEEPTALK_VERIFICATION_TRIALS_H_
