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

#include "deeptalk/verification/trials.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

namespace {

std::string PairText(const std::string& enroll, const std::string& test) {
  return "(" + enroll + ", " + test + ")";
}

}  // namespace

std::vector<Trial> MakeTrials(const std::vector<TrialUtt>& utts,
                              uint64_t seed) {
  const int n = static_cast<int>(utts.size());
  Require(n >= 2, "trial generation needs at least 2 utterances");
  std::set<std::string> ids;
  for (const TrialUtt& u : utts) {
    Require(ids.insert(u.utt_id).second,
            "duplicate utterance id " + u.utt_id);
  }

  std::vector<Trial> trials;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (utts[i].speaker_id == utts[j].speaker_id) {
        trials.push_back({utts[i].utt_id, utts[j].utt_id, true});
      }
    }
  }
  const int64_t n_genuine = static_cast<int64_t>(trials.size());
  Require(n_genuine >= 1,
          "trial generation needs at least one same-speaker pair");

  int64_t n_cross = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (utts[i].speaker_id != utts[j].speaker_id) ++n_cross;
    }
  }
  Require(n_cross >= n_genuine,
          "not enough cross-speaker pairs: need " + std::to_string(n_genuine) +
              ", have " + std::to_string(n_cross));

  Rng rng(DeriveSeed(seed, 41));
  std::set<int64_t> used;
  int64_t attempts = 0;
  const int64_t max_attempts = 1000 + 400 * n_genuine;
  while (static_cast<int64_t>(used.size()) < n_genuine) {
    ++attempts;
    Require(attempts <= max_attempts,
            "impostor sampling stalled after " + std::to_string(attempts) +
                " attempts");
    const int a = static_cast<int>(rng.UniformInt(n));
    const int b = static_cast<int>(rng.UniformInt(n));
    if (a == b || utts[a].speaker_id == utts[b].speaker_id) continue;
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    const int64_t key = static_cast<int64_t>(lo) * n + hi;
    if (!used.insert(key).second) continue;
    trials.push_back({utts[lo].utt_id, utts[hi].utt_id, false});
  }
  return trials;
}

void WriteTrials(const std::string& path, const std::vector<Trial>& trials) {
  std::string out = "enroll_utt\ttest_utt\tlabel\n";
  for (const Trial& t : trials) {
    Require(t.enroll_utt != t.test_utt,
            "trial enrolls an utterance against itself: " + t.enroll_utt);
    out += t.enroll_utt + "\t" + t.test_utt + "\t" +
           (t.genuine ? "tgt" : "non") + "\n";
  }
  WriteTextFile(path, out);
}

std::vector<Trial> ReadTrials(const std::string& path) {
  const std::vector<std::string> lines = ReadLines(path);
  Require(!lines.empty() && lines[0] == "enroll_utt\ttest_utt\tlabel",
          path + ": missing trial header");
  std::vector<Trial> trials;
  std::set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitTsvLine(lines[i]);
    Require(f.size() == 3,
            path + " line " + std::to_string(i + 1) + ": expected 3 columns");
    Require(f[2] == "tgt" || f[2] == "non",
            path + " line " + std::to_string(i + 1) + ": bad label " + f[2]);
    Require(f[0] != f[1], path + " line " + std::to_string(i + 1) +
                              ": trial enrolls an utterance against itself");
    Require(seen.insert(f[0] + "\t" + f[1]).second,
            path + " line " + std::to_string(i + 1) + ": duplicate trial " +
                PairText(f[0], f[1]));
    trials.push_back({f[0], f[1], f[2] == "tgt"});
  }
  Require(!trials.empty(), path + ": no trials");
  return trials;
}

void WriteScores(const std::string& path, const std::vector<ScoreSet>& sets) {
  std::string out = "enroll_utt\ttest_utt\tscore\tsystem_id\n";
  for (const ScoreSet& s : sets) {
    Require(!s.system_id.empty(), "score set has an empty system id");
    for (const ScoredTrial& st : s.trials) {
      Require(std::isfinite(st.score),
              "non-finite score for trial " +
                  PairText(st.trial.enroll_utt, st.trial.test_utt));
      out += st.trial.enroll_utt + "\t" + st.trial.test_utt + "\t" +
             FormatReal(st.score) + "\t" + s.system_id + "\n";
    }
  }
  WriteTextFile(path, out);
}

std::vector<ScoreSet> ReadScoreSets(const std::string& path,
                                    const std::vector<Trial>& trials) {
  std::map<std::string, const Trial*> by_pair;
  for (const Trial& t : trials) {
    by_pair[t.enroll_utt + "\t" + t.test_utt] = &t;
  }

  const std::vector<std::string> lines = ReadLines(path);
  Require(!lines.empty() &&
              lines[0] == "enroll_utt\ttest_utt\tscore\tsystem_id",
          path + ": missing score header");

  std::vector<ScoreSet> sets;
  std::map<std::string, size_t> set_index;
  std::set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitTsvLine(lines[i]);
    Require(f.size() == 4,
            path + " line " + std::to_string(i + 1) + ": expected 4 columns");
    const auto trial_it = by_pair.find(f[0] + "\t" + f[1]);
    Require(trial_it != by_pair.end(),
            path + " line " + std::to_string(i + 1) +
                ": score for unknown trial " + PairText(f[0], f[1]));
    Require(seen.insert(f[3] + "\t" + f[0] + "\t" + f[1]).second,
            path + " line " + std::to_string(i + 1) +
                ": duplicate score for trial " + PairText(f[0], f[1]) +
                " in system " + f[3]);
    const double score = ParseReal(f[2], path + " line " +
                                             std::to_string(i + 1));
    auto idx_it = set_index.find(f[3]);
    if (idx_it == set_index.end()) {
      idx_it = set_index.emplace(f[3], sets.size()).first;
      sets.push_back({f[3], {}});
    }
    sets[idx_it->second].trials.push_back({*trial_it->second, score});
  }
  Require(!sets.empty(), path + ": no scores");
  for (const ScoreSet& s : sets) {
    Require(s.trials.size() == trials.size(),
            path + ": system " + s.system_id + " scored " +
                std::to_string(s.trials.size()) + " of " +
                std::to_string(trials.size()) + " trials");
  }
  return sets;
}

void WriteEmbeddings(
    const std::string& path,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows) {
  Require(!rows.empty(), "no embeddings to write");
  const int dim = static_cast<int>(rows[0].second.size());
  std::string out;
  for (const auto& [id, vec] : rows) {
    Require(static_cast<int>(vec.size()) == dim,
            "embedding dimension mismatch for " + id);
    out += id;
    for (int i = 0; i < dim; ++i) out += "\t" + FormatReal(vec[i]);
    out += "\n";
  }
  WriteTextFile(path, out);
}

std::vector<std::pair<std::string, Eigen::VectorXd>> ReadEmbeddings(
    const std::string& path) {
  const std::vector<std::string> lines = ReadLines(path);
  Require(!lines.empty(), path + ": no embeddings");
  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
  size_t dim = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitTsvLine(lines[i]);
    Require(f.size() >= 2,
            path + " line " + std::to_string(i + 1) + ": expected id and values");
    if (i == 0) dim = f.size() - 1;
    Require(f.size() - 1 == dim,
            path + " line " + std::to_string(i + 1) + ": expected " +
                std::to_string(dim) + " values, got " +
                std::to_string(f.size() - 1));
    Eigen::VectorXd vec(static_cast<int>(dim));
    for (size_t j = 1; j < f.size(); ++j) {
      vec[static_cast<int>(j - 1)] =
          ParseReal(f[j], path + " line " + std::to_string(i + 1));
    }
    rows.emplace_back(f[0], std::move(vec));
  }
  return rows;
}

std::map<std::string, Eigen::VectorXd> ToEmbeddingMap(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows) {
  std::map<std::string, Eigen::VectorXd> out;
  for (const auto& [id, vec] : rows) {
    Require(out.emplace(id, vec).second, "duplicate embedding for " + id);
  }
  return out;
}

double CosineScore(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Require(a.size() == b.size(), "cosine score dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  Require(na > 1e-12 && nb > 1e-12, "cosine score of a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

ScoreSet ScoreTrials(const std::vector<Trial>& trials,
                     const std::map<std::string, Eigen::VectorXd>& embeddings,
                     const std::string& system_id) {
  ScoreSet out;
  out.system_id = system_id;
  out.trials.reserve(trials.size());
  auto lookup = [&](const std::string& id) -> const Eigen::VectorXd& {
    const auto it = embeddings.find(id);
    Require(it != embeddings.end(), "missing embedding for utterance " + id);
    return it->second;
  };
  for (const Trial& t : trials) {
    out.trials.push_back(
        {t, CosineScore(lookup(t.enroll_utt), lookup(t.test_utt))});
  }
  return out;
}

}  // namespace deeptalk
