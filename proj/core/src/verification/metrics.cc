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

#include "deeptalk/verification/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

std::vector<DetPoint> SweepDet(const ScoreSet& scores) {
  std::vector<double> genuine;
  std::vector<double> impostor;
  for (const ScoredTrial& st : scores.trials) {
    Require(std::isfinite(st.score),
            "non-finite score for trial (" + st.trial.enroll_utt + ", " +
                st.trial.test_utt + ")");
    (st.trial.genuine ? genuine : impostor).push_back(st.score);
  }
  Require(!genuine.empty() && !impostor.empty(),
          "metric computation needs at least one genuine and one impostor "
          "trial; got " +
              std::to_string(genuine.size()) + " genuine, " +
              std::to_string(impostor.size()) + " impostor");
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  std::vector<double> all;
  all.reserve(genuine.size() + impostor.size());
  all.insert(all.end(), genuine.begin(), genuine.end());
  all.insert(all.end(), impostor.begin(), impostor.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  thresholds.insert(thresholds.end(), all.begin(), all.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double n_gen = static_cast<double>(genuine.size());
  const double n_imp = static_cast<double>(impostor.size());
  std::vector<DetPoint> det;
  det.reserve(thresholds.size());
  for (const double theta : thresholds) {
    const auto imp_below =
        std::lower_bound(impostor.begin(), impostor.end(), theta) -
        impostor.begin();
    const auto gen_below =
        std::lower_bound(genuine.begin(), genuine.end(), theta) -
        genuine.begin();
    DetPoint p;
    p.threshold = theta;
    p.fmr = (n_imp - static_cast<double>(imp_below)) / n_imp;
    p.fnmr = static_cast<double>(gen_below) / n_gen;
    det.push_back(p);
  }
  return det;
}

double ComputeEer(const std::vector<DetPoint>& det) {
  Require(det.size() >= 2, "DET sweep has fewer than 2 points");
  for (size_t i = 0; i + 1 < det.size(); ++i) {
    const double d1 = det[i].fnmr - det[i].fmr;
    const double d2 = det[i + 1].fnmr - det[i + 1].fmr;
    if (d1 <= 0.0 && d2 >= 0.0) {
      if (d2 == d1) return det[i].fmr;
      const double t = -d1 / (d2 - d1);
      return det[i].fmr + t * (det[i + 1].fmr - det[i].fmr);
    }
  }
  Fail("DET sweep has no FMR/FNMR crossing");
}

double ComputeTmrAtFmr(const std::vector<DetPoint>& det, double fmr_target) {
  Require(!det.empty(), "DET sweep is empty");
  Require(fmr_target >= 0.0 && fmr_target < 1.0,
          "FMR target must lie in [0, 1)");
  for (const DetPoint& p : det) {
    if (p.fmr <= fmr_target) return 1.0 - p.fnmr;
  }
  Fail("DET sweep has no operating point with FMR <= target");
}

MinDcf ComputeMinDcf(const std::vector<DetPoint>& det, const DcfConfig& cfg) {
  Require(!det.empty(), "DET sweep is empty");
  Require(cfg.p_tar > 0.0 && cfg.p_tar < 1.0, "p_tar must lie in (0, 1)");
  Require(cfg.c_miss > 0.0 && cfg.c_fa > 0.0, "DCF costs must be positive");
  double raw = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : det) {
    const double dcf =
        cfg.c_miss * cfg.p_tar * p.fnmr + cfg.c_fa * (1.0 - cfg.p_tar) * p.fmr;
    raw = std::min(raw, dcf);
  }
  MinDcf out;
  out.raw = raw;
  out.normalized =
      raw / std::min(cfg.c_miss * cfg.p_tar, cfg.c_fa * (1.0 - cfg.p_tar));
  return out;
}

VerificationReport Evaluate(const ScoreSet& scores, const DcfConfig& dcf) {
  VerificationReport r;
  for (const ScoredTrial& st : scores.trials) {
    (st.trial.genuine ? r.n_genuine : r.n_impostor) += 1;
  }
  r.det = SweepDet(scores);
  r.eer = ComputeEer(r.det);
  r.tmr_at_fmr1 = ComputeTmrAtFmr(r.det, 0.01);
  r.min_dcf = ComputeMinDcf(r.det, dcf);
  return r;
}

void WriteReport(const std::string& path, const VerificationReport& report) {
  std::string out;
  out += "eer\t" + FormatReal(report.eer) + "\n";
  out += "tmr_at_fmr1\t" + FormatReal(report.tmr_at_fmr1) + "\n";
  out += "min_dcf_normalized\t" + FormatReal(report.min_dcf.normalized) + "\n";
  out += "min_dcf_raw\t" + FormatReal(report.min_dcf.raw) + "\n";
  out += "n_genuine\t" + std::to_string(report.n_genuine) + "\n";
  out += "n_impostor\t" + std::to_string(report.n_impostor) + "\n";
  WriteTextFile(path, out);
}

void WriteDetTsv(const std::string& path, const std::vector<DetPoint>& det) {
  std::string out = "threshold\tfmr\tfnmr\n";
  for (const DetPoint& p : det) {
    out += FormatReal(p.threshold) + "\t" + FormatReal(p.fmr) + "\t" +
           FormatReal(p.fnmr) + "\n";
  }
  WriteTextFile(path, out);
}

}  // namespace deeptalk
