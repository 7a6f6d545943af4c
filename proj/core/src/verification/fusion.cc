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

#include "deeptalk/verification/fusion.h"

#include <cmath>
#include <map>
#include <string>

#include "deeptalk/common/require.h"

namespace deeptalk {

ScoreSet ZNorm(const ScoreSet& scores) {
  const size_t n = scores.trials.size();
  Require(n >= 2, "z-normalization needs at least 2 scores");
  double mean = 0.0;
  for (const ScoredTrial& st : scores.trials) mean += st.score;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const ScoredTrial& st : scores.trials) {
    const double d = st.score - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  Require(var > 0.0, "z-normalization of a constant score set (system " +
                         scores.system_id + ")");
  const double inv_std = 1.0 / std::sqrt(var);

  ScoreSet out = scores;
  for (ScoredTrial& st : out.trials) {
    st.score = (st.score - mean) * inv_std;
  }
  return out;
}

ScoreSet Fuse(const ScoreSet& a, const ScoreSet& b, double w_a, double w_b) {
  Require(w_a > 0.0 && w_b > 0.0, "fusion weights must be positive");
  Require(a.trials.size() == b.trials.size(),
          "score sets cover different trial counts: " +
              std::to_string(a.trials.size()) + " vs " +
              std::to_string(b.trials.size()));

  std::map<std::string, const ScoredTrial*> by_pair;
  for (const ScoredTrial& st : b.trials) {
    const std::string key = st.trial.enroll_utt + "\t" + st.trial.test_utt;
    Require(by_pair.emplace(key, &st).second,
            "duplicate trial (" + st.trial.enroll_utt + ", " +
                st.trial.test_utt + ") in system " + b.system_id);
  }

  std::string missing;
  int n_missing = 0;
  ScoreSet out;
  out.system_id = "fused";
  out.trials.reserve(a.trials.size());
  const double inv_total = 1.0 / (w_a + w_b);
  for (const ScoredTrial& sa : a.trials) {
    const std::string key = sa.trial.enroll_utt + "\t" + sa.trial.test_utt;
    const auto it = by_pair.find(key);
    if (it == by_pair.end()) {
      if (n_missing < 5) {
        missing += (n_missing ? ", " : "") + std::string("(") +
                   sa.trial.enroll_utt + ", " + sa.trial.test_utt + ")";
      }
      ++n_missing;
      continue;
    }
    Require(it->second->trial.genuine == sa.trial.genuine,
            "trial (" + sa.trial.enroll_utt + ", " + sa.trial.test_utt +
                "): label disagreement between systems " + a.system_id +
                " and " + b.system_id);
    out.trials.push_back(
        {sa.trial, (w_a * sa.score + w_b * it->second->score) * inv_total});
  }
  Require(n_missing == 0,
          "score sets are not aligned; " + std::to_string(n_missing) +
              " trials of system " + a.system_id + " are missing from " +
              b.system_id + ": " + missing);
  return out;
}

}  // namespace deeptalk
