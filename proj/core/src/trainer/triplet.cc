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

#include "deeptalk/trainer/triplet.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "deeptalk/common/require.h"

namespace deeptalk {

double CosineDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 1.0 - a.dot(b);
}

double TripletLoss(const Eigen::VectorXd& anchor, const Eigen::VectorXd& pos,
                   const Eigen::VectorXd& neg, double margin) {
  Require(margin > 0.0, "triplet margin must be positive");
  for (const Eigen::VectorXd* e : {&anchor, &pos, &neg}) {
    Require(std::abs(e->norm() - 1.0) <= 1e-6,
            "triplet loss requires unit-norm embeddings");
  }
  const double d_ap = CosineDistance(anchor, pos);
  const double d_an = CosineDistance(anchor, neg);
  return std::max(0.0, d_ap - d_an + margin);
}

std::vector<TripletIdx> SampleTriplets(
    const std::vector<std::string>& speaker_of_utt, int batch,
    const std::string& mining, double margin, int negative_pool, Rng* rng,
    const std::function<Eigen::VectorXd(int)>& embed) {
  Require(batch >= 1, "batch must be >= 1");
  Require(mining == "random" || mining == "semi-hard",
          "mining must be 'random' or 'semi-hard', got '" + mining + "'");
  const int n = static_cast<int>(speaker_of_utt.size());

  std::map<std::string, std::vector<int>> by_speaker;
  for (int i = 0; i < n; ++i) by_speaker[speaker_of_utt[i]].push_back(i);
  std::vector<const std::vector<int>*> eligible;
  std::vector<std::string> eligible_names;
  for (const auto& [speaker, utts] : by_speaker) {
    if (utts.size() >= 2) {
      eligible.push_back(&utts);
      eligible_names.push_back(speaker);
    }
  }
  Require(eligible.size() >= 2,
          "triplet sampling needs at least 2 speakers with 2 utterances "
          "each; eligible speakers: " +
              std::to_string(eligible.size()));

  const bool semi_hard = mining == "semi-hard";
  std::vector<int> pool;
  if (semi_hard) {
    Require(negative_pool >= 1, "negative_pool must be >= 1");
    Require(embed != nullptr, "semi-hard mining needs an embedding callback");
    pool.reserve(negative_pool);
    for (int k = 0; k < negative_pool; ++k) {
      pool.push_back(static_cast<int>(rng->UniformInt(n)));
    }
  }

  std::map<int, Eigen::VectorXd> emb_cache;
  auto embedding = [&](int idx) -> const Eigen::VectorXd& {
    auto it = emb_cache.find(idx);
    if (it == emb_cache.end()) it = emb_cache.emplace(idx, embed(idx)).first;
    return it->second;
  };

  std::vector<TripletIdx> triplets;
  triplets.reserve(batch);
  for (int b = 0; b < batch; ++b) {
    const int spk_idx = static_cast<int>(rng->UniformInt(eligible.size()));
    const std::vector<int>& utts = *eligible[spk_idx];
    const std::string& spk = eligible_names[spk_idx];
    const int m = static_cast<int>(utts.size());
    const int ai = static_cast<int>(rng->UniformInt(m));
    int pi = static_cast<int>(rng->UniformInt(m - 1));
    if (pi >= ai) ++pi;
    TripletIdx t;
    t.anchor = utts[ai];
    t.positive = utts[pi];

    std::vector<int> others;
    others.reserve(n);
    for (int i = 0; i < n; ++i) {
      if (speaker_of_utt[i] != spk) others.push_back(i);
    }

    bool picked = false;
    if (semi_hard) {
      std::vector<int> candidates;
      for (int idx : pool) {
        if (speaker_of_utt[idx] != spk) candidates.push_back(idx);
      }
      if (!candidates.empty()) {
        const double d_ap =
            CosineDistance(embedding(t.anchor), embedding(t.positive));
        int best_band = -1;
        double best_band_d = 0.0;
        int best_any = -1;
        double best_any_d = 0.0;
        for (int idx : candidates) {
          const double d_an =
              CosineDistance(embedding(t.anchor), embedding(idx));
          if (best_any < 0 || d_an < best_any_d) {
            best_any = idx;
            best_any_d = d_an;
          }
          if (d_an > d_ap && d_an < d_ap + margin &&
              (best_band < 0 || d_an < best_band_d)) {
            best_band = idx;
            best_band_d = d_an;
          }
        }
        t.negative = best_band >= 0 ? best_band : best_any;
        picked = true;
      }
    }
    if (!picked) {
      t.negative = others[rng->UniformInt(others.size())];
    }
    triplets.push_back(t);
  }
  return triplets;
}

}  // namespace deeptalk
