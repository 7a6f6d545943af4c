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

#include "deeptalk/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>

#include "deeptalk/audio/wav_io.h"
#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"
#include "deeptalk/frontend/framing.h"
#include "deeptalk/trainer/checkpoint.h"

namespace deeptalk {

namespace {

constexpr uint64_t kTagInit = 21;
constexpr uint64_t kTagSample = 22;
constexpr uint64_t kTagCrop = 23;

Waveform CropWave(const Waveform& w, int offset, int len) {
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.source_id = w.source_id;
  const int n = static_cast<int>(w.samples.size());
  const int end = std::min(n, offset + len);
  out.samples.assign(w.samples.begin() + offset, w.samples.begin() + end);
  return out;
}

}  // namespace

TrainStepResult TrainStep(const TrainConfig& cfg,
                          const std::vector<Eigen::MatrixXd>& crops,
                          const std::vector<TripletIdx>& triplets,
                          EmbedderModel* model, AdamState* adam) {
  Require(model->opts.l2_normalize,
          "triplet training requires l2-normalized embeddings");
  Require(!crops.empty() && !triplets.empty(),
          "training step needs at least one crop and one triplet");

  const int n = static_cast<int>(crops.size());
  std::vector<EmbedCache> caches(n);
  std::vector<Eigen::VectorXd> embs(n);
  for (int i = 0; i < n; ++i) {
    embs[i] = EmbedFrames(*model, crops[i], &caches[i]);
  }

  const int dim = static_cast<int>(embs[0].size());
  std::vector<Eigen::VectorXd> d_emb(n, Eigen::VectorXd::Zero(dim));
  const double inv_batch = 1.0 / static_cast<double>(triplets.size());

  TrainStepResult result;
  double total = 0.0;
  for (const TripletIdx& t : triplets) {
    Require(t.anchor >= 0 && t.anchor < n && t.positive >= 0 &&
                t.positive < n && t.negative >= 0 && t.negative < n,
            "triplet index out of range");
    const double loss =
        TripletLoss(embs[t.anchor], embs[t.positive], embs[t.negative],
                    cfg.margin);
    Require(std::isfinite(loss),
            "non-finite loss at triplet (" + std::to_string(t.anchor) + ", " +
                std::to_string(t.positive) + ", " +
                std::to_string(t.negative) + ")");
    total += loss;
    if (loss > 0.0) {
      ++result.active_triplets;
      d_emb[t.anchor] += (embs[t.negative] - embs[t.positive]) * inv_batch;
      d_emb[t.positive] -= embs[t.anchor] * inv_batch;
      d_emb[t.negative] += embs[t.anchor] * inv_batch;
    }
  }
  result.mean_loss = total * inv_batch;

  EmbedderGrads grads = ZeroEmbedderGrads(*model);
  for (int i = 0; i < n; ++i) {
    if (d_emb[i].squaredNorm() > 0.0) {
      EmbedBackward(*model, caches[i], d_emb[i], &grads);
    }
  }

  AdamConfig acfg;
  acfg.learning_rate = cfg.learning_rate;
  const std::vector<ParamRef> params = CollectParams(model);
  const std::vector<ParamRef> gviews = CollectGrads(*model, &grads);
  AdamStep(acfg, params, gviews, adam);
  return result;
}

TrainResult TrainLoop(const EmbedderOptions& opts, const TrainConfig& cfg,
                      const CorpusManifest& manifest,
                      const std::string& manifest_path,
                      const std::string& out_dir) {
  Require(opts.l2_normalize,
          "triplet training requires l2-normalized embeddings");
  Require(cfg.epochs >= 0, "epochs must be non-negative");
  Require(cfg.triplets_per_batch >= 1, "batch size must be at least 1");
  Require(cfg.margin > 0.0, "margin must be positive");
  Require(cfg.learning_rate > 0.0, "learning rate must be positive");
  Require(cfg.mining == "random" || cfg.mining == "semi-hard",
          "unknown mining mode: " + cfg.mining);
  Require(cfg.negative_pool >= 1, "negative pool must be at least 1");
  Require(cfg.steps_per_epoch >= 0, "steps per epoch must be non-negative");

  std::vector<const ManifestEntry*> train;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split == "train") train.push_back(&e);
  }
  Require(!train.empty(), "manifest has no train entries");

  const int n_utts = static_cast<int>(train.size());
  const int crop_len = std::max(
      1, static_cast<int>(std::lround(cfg.crop_seconds * kSampleRate)));

  std::vector<Waveform> waves;
  waves.reserve(train.size());
  std::vector<std::string> speaker_of_utt;
  speaker_of_utt.reserve(train.size());
  for (const ManifestEntry* e : train) {
    waves.push_back(LoadWav(ResolveManifestPath(manifest_path, e->path)));
    speaker_of_utt.push_back(e->speaker_id);
    const int view =
        std::min(crop_len, static_cast<int>(waves.back().samples.size()));
    const int frames = view < opts.framing.window
                           ? 0
                           : NumFrames(view, opts.framing);
    Require(frames >= 4, "training crop of " + e->path + " yields " +
                             std::to_string(frames) +
                             " frames; need at least 4");
  }

  EmbedderModel model = InitEmbedder(opts, DeriveSeed(cfg.seed, kTagInit));
  AdamState adam = InitAdamState(CollectParams(&model));

  const int steps =
      cfg.steps_per_epoch > 0
          ? cfg.steps_per_epoch
          : std::max(1, n_utts / cfg.triplets_per_batch);

  std::filesystem::create_directories(out_dir);
  const std::string ckpt_path = out_dir + "/model.ckpt";
  const std::string seed_meta = "seed = " + std::to_string(cfg.seed) + "\n";

  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_sum = 0.0;
    for (int step = 0; step < steps; ++step) {
      const uint64_t key =
          static_cast<uint64_t>(epoch) * 1000000u + static_cast<uint64_t>(step);

      Rng crop_rng(DeriveSeed(cfg.seed, kTagCrop, key));
      std::vector<int> offsets(n_utts, 0);
      for (int i = 0; i < n_utts; ++i) {
        const int n = static_cast<int>(waves[i].samples.size());
        if (n > crop_len) {
          offsets[i] = static_cast<int>(crop_rng.UniformInt(n - crop_len + 1));
        }
      }

      // Frame each utterance's view of this step at most once, shared
      // between mining and the update.
      std::vector<Eigen::MatrixXd> framed(n_utts);
      std::vector<char> have(n_utts, 0);
      auto frames_of = [&](int i) -> const Eigen::MatrixXd& {
        if (!have[i]) {
          framed[i] =
              FrameSignal(CropWave(waves[i], offsets[i], crop_len),
                          opts.framing);
          have[i] = 1;
        }
        return framed[i];
      };

      const std::string mode =
          (cfg.mining == "semi-hard" && epoch >= cfg.semi_hard_start_epoch)
              ? "semi-hard"
              : "random";
      Rng sample_rng(DeriveSeed(cfg.seed, kTagSample, key));
      auto embed = [&](int i) { return EmbedFrames(model, frames_of(i), nullptr); };
      const std::vector<TripletIdx> triplets =
          SampleTriplets(speaker_of_utt, cfg.triplets_per_batch, mode,
                         cfg.margin, cfg.negative_pool, &sample_rng, embed);

      std::vector<int> remap(n_utts, -1);
      std::vector<Eigen::MatrixXd> crops;
      std::vector<TripletIdx> local;
      local.reserve(triplets.size());
      auto local_index = [&](int i) {
        if (remap[i] < 0) {
          remap[i] = static_cast<int>(crops.size());
          crops.push_back(frames_of(i));
        }
        return remap[i];
      };
      for (const TripletIdx& t : triplets) {
        local.push_back({local_index(t.anchor), local_index(t.positive),
                         local_index(t.negative)});
      }

      const TrainStepResult sr =
          TrainStep(cfg, crops, local, &model, &adam);
      result.loss_log.push_back({epoch, step, sr.mean_loss});
      epoch_sum += sr.mean_loss;
    }
    const double epoch_mean = epoch_sum / steps;
    if (epoch == 0) result.stats.first_epoch_mean_loss = epoch_mean;
    result.stats.last_epoch_mean_loss = epoch_mean;

    TrainState state;
    state.epoch = static_cast<uint32_t>(epoch + 1);
    state.step = 0;
    state.seed = cfg.seed;
    SaveCheckpoint(ckpt_path, &model, &adam, state);
  }

  if (cfg.epochs == 0) {
    TrainState state;
    state.seed = cfg.seed;
    SaveCheckpoint(ckpt_path, &model, &adam, state);
  }
  WriteTextFile(ckpt_path + ".meta", seed_meta);

  std::string log = "epoch\tstep\tloss\n";
  for (const LossLogRow& row : result.loss_log) {
    log += std::to_string(row.epoch) + "\t" + std::to_string(row.step) + "\t" +
           FormatReal(row.loss) + "\n";
  }
  WriteTextFile(out_dir + "/loss_log.tsv", log);
  WriteTextFile(out_dir + "/loss_log.tsv.meta", seed_meta);

  result.model = std::move(model);
  return result;
}

}  // namespace deeptalk
