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

#ifndef DEEPTALK_ANALYSIS_EMBEDDING_SPACE_H_
#define DEEPTALK_ANALYSIS_EMBEDDING_SPACE_H_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace deeptalk {

struct SpeakerDistances {
  std::string speaker_id;
  double mean_intra = 0.0;  // over the speaker's own utterance pairs
  double mean_inter = 0.0;  // against every other speaker's utterances
  double separation = 0.0;  // (inter - intra) / max(inter, intra)
};

struct DistanceReport {
  std::vector<SpeakerDistances> per_speaker;  // sorted by speaker id
  double grand_mean_intra = 0.0;  // pooled over all intra pairs
  double grand_mean_inter = 0.0;  // pooled over all cross-speaker pairs
};

// Euclidean distance statistics over (speaker_id, embedding) rows. Needs at
// least 2 speakers, each with at least 2 utterances. Invariant to row order.
DistanceReport ComputeDistanceReport(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& labeled);

void WriteDistanceReportTsv(const std::string& path,
                            const DistanceReport& report);

// Centers the embeddings and projects them onto the top two principal
// directions. Rows align with the input; deterministic up to the sign rule
// that each column's largest-magnitude entry is positive. Needs at least 3
// embeddings of dimension at least 2.
Eigen::MatrixXd Project2d(const std::vector<Eigen::VectorXd>& embeddings);

// Header utterance_id/x/y.
void WriteProjectionTsv(const std::string& path,
                        const std::vector<std::string>& ids,
                        const Eigen::MatrixXd& coords);

}  // namespace deeptalk

#endif  // DEEPTALK_ANALYSIS_EMBEDDING_SPACE_H_
