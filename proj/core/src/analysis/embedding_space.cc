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

#include "deeptalk/analysis/embedding_space.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

DistanceReport ComputeDistanceReport(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& labeled) {
  std::map<std::string, std::vector<const Eigen::VectorXd*>> by_speaker;
  Eigen::Index dim = -1;
  for (const auto& [speaker, vec] : labeled) {
    Require(dim < 0 || vec.size() == dim, "embedding dimension mismatch");
    dim = vec.size();
    by_speaker[speaker].push_back(&vec);
  }
  Require(by_speaker.size() >= 2,
          "distance report needs at least 2 speakers, got " +
              std::to_string(by_speaker.size()));
  for (const auto& [speaker, vecs] : by_speaker) {
    Require(vecs.size() >= 2, "distance report needs at least 2 utterances "
                              "per speaker; speaker " +
                                  speaker + " has " +
                                  std::to_string(vecs.size()));
  }

  auto dist = [](const Eigen::VectorXd* a, const Eigen::VectorXd* b) {
    return (*a - *b).norm();
  };

  DistanceReport report;
  double pooled_intra = 0.0;
  int64_t n_pooled_intra = 0;
  double pooled_inter = 0.0;
  int64_t n_pooled_inter = 0;

  for (const auto& [speaker, vecs] : by_speaker) {
    SpeakerDistances row;
    row.speaker_id = speaker;

    double intra = 0.0;
    int64_t n_intra = 0;
    for (size_t i = 0; i < vecs.size(); ++i) {
      for (size_t j = i + 1; j < vecs.size(); ++j) {
        intra += dist(vecs[i], vecs[j]);
        ++n_intra;
      }
    }
    row.mean_intra = intra / static_cast<double>(n_intra);
    pooled_intra += intra;
    n_pooled_intra += n_intra;

    double inter = 0.0;
    int64_t n_inter = 0;
    for (const auto& [other, other_vecs] : by_speaker) {
      if (other == speaker) continue;
      for (const Eigen::VectorXd* a : vecs) {
        for (const Eigen::VectorXd* b : other_vecs) {
          inter += dist(a, b);
          ++n_inter;
        }
      }
    }
    row.mean_inter = inter / static_cast<double>(n_inter);
    // Each unordered cross pair appears once per involved speaker.
    pooled_inter += inter / 2.0;
    n_pooled_inter += n_inter / 2;

    const double hi = std::max(row.mean_inter, row.mean_intra);
    row.separation = hi > 0.0 ? (row.mean_inter - row.mean_intra) / hi : 0.0;
    report.per_speaker.push_back(row);
  }

  report.grand_mean_intra =
      pooled_intra / static_cast<double>(n_pooled_intra);
  report.grand_mean_inter =
      pooled_inter / static_cast<double>(n_pooled_inter);
  return report;
}

void WriteDistanceReportTsv(const std::string& path,
                            const DistanceReport& report) {
  std::string out = "speaker_id\tmean_intra\tmean_inter\tseparation\n";
  for (const SpeakerDistances& row : report.per_speaker) {
    out += row.speaker_id + "\t" + FormatReal(row.mean_intra) + "\t" +
           FormatReal(row.mean_inter) + "\t" + FormatReal(row.separation) +
           "\n";
  }
  out += "__grand__\t" + FormatReal(report.grand_mean_intra) + "\t" +
         FormatReal(report.grand_mean_inter) + "\t" +
         FormatReal(report.grand_mean_inter - report.grand_mean_intra) + "\n";
  WriteTextFile(path, out);
}

Eigen::MatrixXd Project2d(const std::vector<Eigen::VectorXd>& embeddings) {
  const int n = static_cast<int>(embeddings.size());
  Require(n >= 3, "projection needs at least 3 embeddings, got " +
                      std::to_string(n));
  const Eigen::Index dim = embeddings[0].size();
  Require(dim >= 2, "projection needs embeddings of dimension at least 2");

  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < n; ++i) {
    Require(embeddings[i].size() == dim, "embedding dimension mismatch");
    x.row(i) = embeddings[i];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  const Eigen::MatrixXd cov =
      (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Require(solver.info() == Eigen::Success, "eigendecomposition failed");

  // Eigenvalues ascend, so the top two directions sit in the last columns.
  Eigen::MatrixXd basis(dim, 2);
  basis.col(0) = solver.eigenvectors().col(dim - 1);
  basis.col(1) = solver.eigenvectors().col(dim - 2);

  Eigen::MatrixXd coords = x * basis;
  for (int c = 0; c < 2; ++c) {
    Eigen::Index at = 0;
    coords.col(c).cwiseAbs().maxCoeff(&at);
    if (coords(at, c) < 0.0) coords.col(c) = -coords.col(c);
  }
  return coords;
}

void WriteProjectionTsv(const std::string& path,
                        const std::vector<std::string>& ids,
                        const Eigen::MatrixXd& coords) {
  Require(static_cast<Eigen::Index>(ids.size()) == coords.rows(),
          "projection rows and ids differ in count");
  Require(coords.cols() == 2, "projection must have 2 columns");
  std::string out = "utterance_id\tx\ty\n";
  for (size_t i = 0; i < ids.size(); ++i) {
    out += ids[i] + "\t" + FormatReal(coords(static_cast<int>(i), 0)) + "\t" +
           FormatReal(coords(static_cast<int>(i), 1)) + "\n";
  }
  WriteTextFile(path, out);
}

}  // namespace deeptalk
