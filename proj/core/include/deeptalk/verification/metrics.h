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

#ifndef DEEPTALK_VERIFICATION_METRICS_H_
#define DEEPTALK_VERIFICATION_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "deeptalk/verification/trials.h"

namespace deeptalk {

// One operating point of the rule "accept iff score >= threshold".
struct DetPoint {
  double threshold = 0.0;
  double fmr = 0.0;   // impostors accepted / impostors
  double fnmr = 0.0;  // genuines rejected / genuines
};

// Exact error trade-off at every distinct score plus -inf and +inf
// sentinels, in ascending threshold order. FMR is non-increasing and FNMR
// non-decreasing along the sweep.
std::vector<DetPoint> SweepDet(const ScoreSet& scores);

// Rate where FMR equals FNMR, linearly interpolated between the two
// adjacent operating points straddling the crossing.
double ComputeEer(const std::vector<DetPoint>& det);

// 1 - FNMR at the best operating point with FMR <= fmr_target; the FMR=0
// sentinel always qualifies.
double ComputeTmrAtFmr(const std::vector<DetPoint>& det,
                       double fmr_target = 0.01);

struct DcfConfig {
  double p_tar = 0.01;
  double c_miss = 10.0;
  double c_fa = 1.0;
};

struct MinDcf {
  double raw = 0.0;
  double normalized = 0.0;  // raw / min(c_miss * p_tar, c_fa * (1 - p_tar))
};

MinDcf ComputeMinDcf(const std::vector<DetPoint>& det,
                     const DcfConfig& cfg = {});

struct VerificationReport {
  std::vector<DetPoint> det;
  double eer = 0.0;
  double tmr_at_fmr1 = 0.0;
  MinDcf min_dcf;
  int64_t n_genuine = 0;
  int64_t n_impostor = 0;
};

// Full metric suite over one score set; needs at least one genuine and one
// impostor trial with finite scores.
VerificationReport Evaluate(const ScoreSet& scores, const DcfConfig& dcf = {});

// Key-value rows: eer, tmr_at_fmr1, min_dcf_normalized, min_dcf_raw,
// n_genuine, n_impostor.
void WriteReport(const std::string& path, const VerificationReport& report);

// Header threshold/fmr/fnmr; sentinel thresholds print as -inf and inf.
void WriteDetTsv(const std::string& path, const std::vector<DetPoint>& det);

}  // namespace deeptalk

#endif  // DEEPTALK_VERIFICATION_METRICS_H_
