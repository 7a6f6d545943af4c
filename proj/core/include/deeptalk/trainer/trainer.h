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

#ifndef DEEPTALK_TRAINER_TRAINER_H_
#define DEEPTALK_TRAINER_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/audio/corpus.h"
#include "deeptalk/style/embedder.h"
#include "deeptalk/trainer/optimizer.h"
#include "deeptalk/trainer/triplet.h"

namespace deeptalk {

struct TrainConfig {
  double margin = 0.5;
  double learning_rate = 1e-3;
  int triplets_per_batch = 32;
  int epochs = 30;
  uint64_t seed = 0;
  std::string mining = "semi-hard";  // "random" or "semi-hard"
  int semi_hard_start_epoch = 2;     // epochs before this index mine randomly
  double crop_seconds = 2.0;         // training view of each utterance
  int steps_per_epoch = 0;           // 0: utterance count / batch size
  int negative_pool = 16;
};

struct LossLogRow {
  int epoch = 0;
  int step = 0;
  double loss = 0.0;
};

struct TrainStats {
  double first_epoch_mean_loss = 0.0;
  double last_epoch_mean_loss = 0.0;
};

struct TrainResult {
  EmbedderModel model;
  std::vector<LossLogRow> loss_log;
  TrainStats stats;
};

struct TrainStepResult {
  double mean_loss = 0.0;
  int active_triplets = 0;  // triplets with a positive hinge
};

// One optimizer update. crops are pre-framed utterance views (T x window)
// and the triplet indices address that list. Gradients accumulate once per
// distinct utterance, each triplet contributing at weight 1 / batch.
TrainStepResult TrainStep(const TrainConfig& cfg,
                          const std::vector<Eigen::MatrixXd>& crops,
                          const std::vector<TripletIdx>& triplets,
                          EmbedderModel* model, AdamState* adam);

// Trains an embedder on the train split of the manifest, every condition
// included. Writes model.ckpt after each epoch plus loss_log.tsv and seed
// sidecars under out_dir. Each step re-crops every utterance at a seeded
// offset, so mining and the update see the same views. Deterministic for a
// fixed (config, manifest) pair.
TrainResult TrainLoop(const EmbedderOptions& opts, const TrainConfig& cfg,
                      const CorpusManifest& manifest,
                      const std::string& manifest_path,
                      const std::string& out_dir);

}  // namespace deeptalk

#endif  // DEEPTALK_TRAINER_TRAINER_H_
