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
//
// Release gate for the toolkit. Each check prints one PASS or FAIL line with
// its measured values and wall time; the process exits nonzero when any
// check fails. Thresholds were fixed after a reference run and are pinned
// here so regressions cannot pass silently.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "deeptalk/analysis/embedding_space.h"
#include "deeptalk/analysis/pitch.h"
#include "deeptalk/audio/corpus.h"
#include "deeptalk/audio/synth.h"
#include "deeptalk/audio/wav_io.h"
#include "deeptalk/audio/waveform.h"
#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"
#include "deeptalk/style/embedder.h"
#include "deeptalk/style/style_tokens.h"
#include "deeptalk/trainer/trainer.h"
#include "deeptalk/trainer/triplet.h"
#include "deeptalk/verification/fusion.h"
#include "deeptalk/verification/metrics.h"
#include "deeptalk/verification/trials.h"
#include "testing/oracles.h"

namespace deeptalk {
namespace {

namespace fs = std::filesystem;

const char kScratch[] = "acceptance_scratch";

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

struct CheckResult {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void Report(int index, const std::string& name, const CheckResult& result,
            double seconds) {
  std::cout << index << " " << name << " "
            << (result.pass ? "PASS" : "FAIL") << " " << result.detail << " ("
            << Fmt("%.1f", seconds) << " s)" << std::endl;
  if (!result.pass) ++g_failures;
}

void RunCheck(int index, const std::string& name,
              const std::function<CheckResult()>& body) {
  const auto start = Clock::now();
  CheckResult result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("exception: ") + e.what();
  }
  Report(index, name, result, SecondsSince(start));
}

ScoreSet SyntheticScoreSet(const std::vector<double>& genuine,
                           const std::vector<double>& impostor) {
  ScoreSet s;
  s.system_id = "sys";
  for (size_t i = 0; i < genuine.size(); ++i) {
    s.trials.push_back(
        {{"g" + std::to_string(i), "h" + std::to_string(i), true},
         genuine[i]});
  }
  for (size_t i = 0; i < impostor.size(); ++i) {
    s.trials.push_back(
        {{"i" + std::to_string(i), "j" + std::to_string(i), false},
         impostor[i]});
  }
  return s;
}

// Detection metrics against an exhaustive threshold-scan oracle on random
// seeded score sets, half of them quantized to force ties.
CheckResult CheckMetricOracle() {
  const auto start = Clock::now();
  double max_delta = 0.0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(DeriveSeed(424242, static_cast<uint64_t>(i)));
    const int n_gen = 1 + static_cast<int>(rng.UniformInt(500));
    const int n_imp = 1 + static_cast<int>(rng.UniformInt(500));
    std::vector<double> gen(n_gen), imp(n_imp);
    const bool quantize = (i % 2) == 0;
    auto draw = [&]() {
      const double s = rng.Gaussian();
      return quantize ? std::round(s * 4.0) / 4.0 : s;
    };
    for (double& s : gen) s = draw() + 0.5;
    for (double& s : imp) s = draw() - 0.5;

    const VerificationReport rep =
        Evaluate(SyntheticScoreSet(gen, imp), DcfConfig{});
    const std::vector<testing::OraclePoint> sweep =
        testing::OracleSweep(gen, imp);
    max_delta = std::max(
        {max_delta, std::abs(rep.eer - testing::OracleEer(sweep)),
         std::abs(rep.tmr_at_fmr1 - testing::OracleTmrAtFmr(sweep, 0.01)),
         std::abs(rep.min_dcf.raw -
                  testing::OracleMinDcfRaw(sweep, 0.01, 10.0, 1.0)),
         std::abs(rep.min_dcf.normalized -
                  testing::OracleMinDcfNormalized(sweep, 0.01, 10.0, 1.0))});
  }
  const double secs = SecondsSince(start);
  CheckResult r;
  r.pass = max_delta <= 1e-9 && secs < 10.0;
  r.detail = "sets=100 max_delta=" + Fmt("%.2e", max_delta);
  return r;
}

EmbedderOptions MiniatureOptions() {
  EmbedderOptions opts;
  opts.framing.window = 16;
  opts.framing.hop = 8;
  opts.frontend = {{3, 2, 1}, {3, 3, 1}};
  opts.ref_conv = {{3, 2, 2}, {3, 2, 2}};
  opts.gru_hidden = 8;
  opts.num_tokens = 4;
  opts.l2_normalize = true;
  return opts;
}

// Analytic batch-triplet-loss gradients for every parameter group against
// central finite differences on a miniature model.
CheckResult CheckGradients() {
  const auto start = Clock::now();
  const EmbedderOptions opts = MiniatureOptions();
  const double margin = 0.5;

  EmbedderModel model;
  std::vector<Eigen::MatrixXd> crops(3);
  double base_loss = 0.0;
  uint64_t chosen_seed = 0;
  for (uint64_t seed = 1; seed <= 200 && chosen_seed == 0; ++seed) {
    model = InitEmbedder(opts, seed);
    Rng rng(DeriveSeed(seed, 9));
    for (Eigen::MatrixXd& crop : crops) {
      crop.resize(6, opts.framing.window);
      for (int t = 0; t < crop.rows(); ++t)
        for (int i = 0; i < crop.cols(); ++i)
          crop(t, i) = 0.5 * rng.Gaussian();
    }
    const Eigen::VectorXd a = EmbedFrames(model, crops[0], nullptr);
    const Eigen::VectorXd p = EmbedFrames(model, crops[1], nullptr);
    const Eigen::VectorXd n = EmbedFrames(model, crops[2], nullptr);
    const double loss = TripletLoss(a, p, n, margin);
    // The hinge must be active and clear of its kink so that the loss is
    // differentiable across the finite-difference step.
    if (loss > 0.05 && loss < 1.5) {
      base_loss = loss;
      chosen_seed = seed;
    }
  }
  Require(chosen_seed != 0, "no seed produced an active triplet");

  EmbedCache ca, cp, cn;
  const Eigen::VectorXd a = EmbedFrames(model, crops[0], &ca);
  const Eigen::VectorXd p = EmbedFrames(model, crops[1], &cp);
  const Eigen::VectorXd n = EmbedFrames(model, crops[2], &cn);
  EmbedderGrads grads = ZeroEmbedderGrads(model);
  EmbedBackward(model, ca, n - p, &grads);
  EmbedBackward(model, cp, -a, &grads);
  EmbedBackward(model, cn, a, &grads);

  auto loss_at = [&]() {
    const Eigen::VectorXd ea = EmbedFrames(model, crops[0], nullptr);
    const Eigen::VectorXd ep = EmbedFrames(model, crops[1], nullptr);
    const Eigen::VectorXd en = EmbedFrames(model, crops[2], nullptr);
    return TripletLoss(ea, ep, en, margin);
  };

  const std::vector<ParamRef> params = CollectParams(&model);
  const std::vector<ParamRef> grad_refs = CollectGrads(model, &grads);
  Require(params.size() == grad_refs.size(), "parameter group mismatch");

  const double h = 1e-5;
  double max_rel = 0.0;
  int64_t n_params = 0;
  for (size_t g = 0; g < params.size(); ++g) {
    Require(params[g].name == grad_refs[g].name, "group order mismatch");
    for (int64_t j = 0; j < params[g].size; ++j) {
      double* x = params[g].data + j;
      const double backup = *x;
      *x = backup + h;
      const double up = loss_at();
      *x = backup - h;
      const double down = loss_at();
      *x = backup;
      const double fd = (up - down) / (2.0 * h);
      const double an = grad_refs[g].data[j];
      const double rel =
          std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-4});
      max_rel = std::max(max_rel, rel);
      ++n_params;
    }
  }
  const double secs = SecondsSince(start);
  CheckResult r;
  r.pass = max_rel < 1e-4 && secs < 60.0;
  r.detail = "seed=" + std::to_string(chosen_seed) +
             " loss=" + Fmt("%.3f", base_loss) +
             " params=" + std::to_string(n_params) +
             " max_rel_err=" + Fmt("%.2e", max_rel);
  return r;
}

// Attention weights must form a valid simplex and the combined vector must
// stay inside the squashed token hull on every random draw.
CheckResult CheckAttentionInvariants() {
  Rng rng(31337);
  double max_sum_err = 0.0;
  double min_weight = 1.0;
  double max_hull_violation = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const int num_tokens = 2 + static_cast<int>(rng.UniformInt(11));
    const int dim = 2 + static_cast<int>(rng.UniformInt(31));
    const double token_scale = rng.Uniform(0.1, 3.0);
    const double ref_scale = rng.Uniform(0.1, 50.0);
    Eigen::MatrixXd tokens(num_tokens, dim);
    for (int i = 0; i < num_tokens; ++i)
      for (int d = 0; d < dim; ++d) tokens(i, d) = token_scale * rng.Gaussian();
    Eigen::VectorXd ref(dim);
    for (int d = 0; d < dim; ++d) ref(d) = ref_scale * rng.Gaussian();

    AttentionCache cache;
    const Eigen::VectorXd w = Attend(ref, tokens, &cache);
    max_sum_err = std::max(max_sum_err, std::abs(w.sum() - 1.0));
    min_weight = std::min(min_weight, w.minCoeff());

    const Eigen::VectorXd combined = Combine(w, tokens);
    const Eigen::MatrixXd squashed = tokens.array().tanh();
    for (int d = 0; d < dim; ++d) {
      const double lo = squashed.col(d).minCoeff();
      const double hi = squashed.col(d).maxCoeff();
      max_hull_violation = std::max(
          {max_hull_violation, lo - combined(d), combined(d) - hi});
    }
  }
  CheckResult r;
  r.pass = max_sum_err <= 1e-9 && min_weight >= 0.0 &&
           max_hull_violation <= 1e-12;
  r.detail = "draws=10000 max_sum_err=" + Fmt("%.2e", max_sum_err) +
             " min_weight=" + Fmt("%.2e", min_weight) +
             " max_hull_violation=" + Fmt("%.2e", max_hull_violation);
  return r;
}

EmbedderOptions FullOptions() {
  EmbedderOptions opts;
  opts.frontend = {{7, 16, 4}, {5, 32, 2}, {5, 32, 2}, {3, 40, 1}};
  opts.ref_conv = {{3, 16, 2}, {3, 16, 2}, {3, 32, 2}, {3, 32, 2}};
  opts.gru_hidden = 128;
  opts.num_tokens = 10;
  opts.l2_normalize = true;
  return opts;
}

struct EmbeddedSplit {
  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
  std::vector<std::pair<std::string, Eigen::VectorXd>> labeled;
  std::vector<TrialUtt> utts;
};

EmbeddedSplit EmbedEvalCondition(const EmbedderModel& model,
                                 const CorpusManifest& manifest,
                                 const std::string& manifest_path,
                                 const std::string& condition,
                                 bool frontend_system) {
  EmbeddedSplit out;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split != "eval" || e.condition != condition) continue;
    const std::string id = UtteranceId(e.path);
    const Waveform w = LoadWav(ResolveManifestPath(manifest_path, e.path));
    Eigen::VectorXd vec;
    if (frontend_system) {
      vec = FrontendEmbed(model, w);
    } else {
      vec = EmbedWaveform(model, w).vector;
    }
    out.rows.emplace_back(id, vec);
    out.labeled.emplace_back(e.speaker_id, vec);
    out.utts.push_back({id, e.speaker_id});
  }
  return out;
}

double EerOf(const std::vector<Trial>& trials, const EmbeddedSplit& split,
             const std::string& system_id) {
  return Evaluate(ScoreTrials(trials, ToEmbeddingMap(split.rows), system_id))
      .eer;
}

// Trains the full model on a seeded 20-speaker corpus and verifies that the
// disjoint 10-speaker eval split discriminates: EER at most 10% and mean
// intra-speaker distance below mean inter-speaker distance.
CheckResult CheckDeskScaleDiscrimination() {
  const std::string dir = std::string(kScratch) + "/discrimination";
  CorpusConfig corpus_cfg;
  corpus_cfg.n_speakers = 20;
  corpus_cfg.utts_per_speaker = 20;
  corpus_cfg.utt_seconds = 5.0;
  corpus_cfg.snr_db = 10.0;
  corpus_cfg.seed = 1001;
  corpus_cfg.out_dir = dir + "/corpus";
  const CorpusManifest manifest = BuildCorpus(corpus_cfg);
  const std::string manifest_path = corpus_cfg.out_dir + "/manifest.tsv";

  TrainConfig train_cfg;
  train_cfg.epochs = 30;
  train_cfg.triplets_per_batch = 32;
  train_cfg.crop_seconds = 2.0;
  train_cfg.seed = 1001;
  const auto train_start = Clock::now();
  const TrainResult trained =
      TrainLoop(FullOptions(), train_cfg, manifest, manifest_path,
                dir + "/model");
  const double train_secs = SecondsSince(train_start);

  const EmbeddedSplit eval_clean = EmbedEvalCondition(
      trained.model, manifest, manifest_path, "clean", false);
  const std::vector<Trial> trials =
      MakeTrials(eval_clean.utts, DeriveSeed(1001, 51));
  const double eer = EerOf(trials, eval_clean, "deeptalk");
  const DistanceReport dist = ComputeDistanceReport(eval_clean.labeled);

  CheckResult r;
  r.pass = eer <= 0.10 && dist.grand_mean_intra < dist.grand_mean_inter &&
           train_secs < 1800.0;
  r.detail = "eer=" + Fmt("%.4f", eer) +
             " mean_intra=" + Fmt("%.4f", dist.grand_mean_intra) +
             " mean_inter=" + Fmt("%.4f", dist.grand_mean_inter) +
             " train_s=" + Fmt("%.0f", train_secs);
  return r;
}

struct ConditionOutcome {
  double eer_clean_deep = 0.0;
  double eer_degraded_deep = 0.0;
  double eer_degraded_front = 0.0;
  double eer_degraded_fused = 0.0;
};

// Shared runs behind the fusion and degradation checks: five seeded corpora
// under a noisy degraded condition, one trained model each.
std::vector<ConditionOutcome> RunConditionSeeds() {
  std::vector<ConditionOutcome> outcomes;
  for (uint64_t seed = 2001; seed <= 2005; ++seed) {
    const std::string dir =
        std::string(kScratch) + "/conditions/s" + std::to_string(seed);
    CorpusConfig corpus_cfg;
    corpus_cfg.n_speakers = 10;
    corpus_cfg.utts_per_speaker = 10;
    corpus_cfg.utt_seconds = 3.0;
    corpus_cfg.snr_db = 5.0;
    corpus_cfg.seed = seed;
    corpus_cfg.out_dir = dir + "/corpus";
    const CorpusManifest manifest = BuildCorpus(corpus_cfg);
    const std::string manifest_path = corpus_cfg.out_dir + "/manifest.tsv";

    TrainConfig train_cfg;
    train_cfg.epochs = 30;
    train_cfg.triplets_per_batch = 32;
    train_cfg.crop_seconds = 2.0;
    train_cfg.seed = seed;
    const TrainResult trained =
        TrainLoop(FullOptions(), train_cfg, manifest, manifest_path,
                  dir + "/model");

    const EmbeddedSplit clean_deep = EmbedEvalCondition(
        trained.model, manifest, manifest_path, "clean", false);
    const EmbeddedSplit deg_deep = EmbedEvalCondition(
        trained.model, manifest, manifest_path, "degraded", false);
    const EmbeddedSplit deg_front = EmbedEvalCondition(
        trained.model, manifest, manifest_path, "degraded", true);

    const std::vector<Trial> trials_clean =
        MakeTrials(clean_deep.utts, DeriveSeed(seed, 51));
    const std::vector<Trial> trials_deg =
        MakeTrials(deg_deep.utts, DeriveSeed(seed, 52));

    ConditionOutcome o;
    o.eer_clean_deep = EerOf(trials_clean, clean_deep, "deeptalk");
    const ScoreSet sd =
        ScoreTrials(trials_deg, ToEmbeddingMap(deg_deep.rows), "deeptalk");
    const ScoreSet sf =
        ScoreTrials(trials_deg, ToEmbeddingMap(deg_front.rows), "frontend");
    o.eer_degraded_deep = Evaluate(sd).eer;
    o.eer_degraded_front = Evaluate(sf).eer;
    o.eer_degraded_fused = Evaluate(Fuse(ZNorm(sd), ZNorm(sf), 1.0, 3.0)).eer;
    outcomes.push_back(o);
  }
  return outcomes;
}

CheckResult CheckFusionBenefit(const std::vector<ConditionOutcome>& runs) {
  int wins = 0;
  double worst_gap = -1.0;
  std::string fused_list, best_list;
  for (const ConditionOutcome& o : runs) {
    const double best = std::min(o.eer_degraded_deep, o.eer_degraded_front);
    const double gap = o.eer_degraded_fused - best;
    if (gap <= 0.01 + 1e-12) ++wins;
    worst_gap = std::max(worst_gap, gap);
    fused_list += (fused_list.empty() ? "" : ",") +
                  Fmt("%.3f", o.eer_degraded_fused);
    best_list += (best_list.empty() ? "" : ",") + Fmt("%.3f", best);
  }
  CheckResult r;
  r.pass = wins >= 4;
  r.detail = "wins=" + std::to_string(wins) + "/5 fused=[" + fused_list +
             "] best_single=[" + best_list + "] worst_gap=" +
             Fmt("%.4f", worst_gap);
  return r;
}

CheckResult CheckDegradationOrdering(
    const std::vector<ConditionOutcome>& runs) {
  bool all_ordered = true;
  double min_gap = 1.0;
  std::string clean_list, degraded_list;
  for (const ConditionOutcome& o : runs) {
    const double gap = o.eer_degraded_deep - o.eer_clean_deep;
    min_gap = std::min(min_gap, gap);
    if (gap < -1e-12) all_ordered = false;
    clean_list += (clean_list.empty() ? "" : ",") +
                  Fmt("%.3f", o.eer_clean_deep);
    degraded_list += (degraded_list.empty() ? "" : ",") +
                     Fmt("%.3f", o.eer_degraded_deep);
  }
  CheckResult r;
  r.pass = all_ordered;
  r.detail = "clean=[" + clean_list + "] degraded=[" + degraded_list +
             "] min_gap=" + Fmt("%.4f", min_gap);
  return r;
}

Waveform PureTone(double hz, double seconds) {
  Waveform w;
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  w.samples.resize(n);
  for (int i = 0; i < n; ++i)
    w.samples[i] = 0.5 * std::sin(2.0 * M_PI * hz * i / kSampleRate);
  return w;
}

// Pitch tracking: pure tones across the speech range within 2 Hz, and the
// estimated contour of jitter-free synthetic utterances correlating with the
// programmed contour at 0.9 or better.
CheckResult CheckF0Fidelity() {
  double max_tone_err = 0.0;
  int tones = 0;
  for (int hz = 80; hz <= 390; hz += 10) {
    const F0Contour c = EstimateF0(PureTone(hz, 0.5));
    Require(!c.frames.empty(), "empty contour for tone");
    int voiced = 0;
    for (const F0Frame& f : c.frames) {
      if (!f.voiced) continue;
      ++voiced;
      max_tone_err = std::max(max_tone_err, std::abs(f.f0 - hz));
    }
    Require(voiced > 0, "tone tracked as unvoiced");
    ++tones;
  }

  double min_r = 1.0;
  Rng rng(606);
  for (int i = 0; i < 5; ++i) {
    SyntheticSpeakerSpec spec =
        DrawSpeakerSpec("contour" + std::to_string(i), &rng);
    spec.jitter = 0.0;
    spec.noise_floor = 0.0;
    const Waveform utt =
        SynthUtterance(spec, 3.0, DeriveSeed(700, static_cast<uint64_t>(i)));
    const F0Contour estimated = EstimateF0(utt);
    Require(!estimated.frames.empty(), "empty contour for utterance");
    F0Contour programmed;
    for (size_t f = 0; f < estimated.frames.size(); ++f) {
      const double center = (static_cast<double>(f) * 80.0 + 160.0) / 8000.0;
      programmed.frames.push_back({ProgrammedF0(spec, center), true, 1.0});
    }
    min_r = std::min(min_r, CompareF0(estimated, programmed).pearson_r);
  }

  CheckResult r;
  r.pass = max_tone_err <= 2.0 && min_r >= 0.9;
  r.detail = "tones=" + std::to_string(tones) +
             " max_tone_err_hz=" + Fmt("%.3f", max_tone_err) +
             " min_contour_r=" + Fmt("%.4f", min_r);
  return r;
}

int RunTool(const std::string& args) {
  const std::string log_dir = std::string(kScratch) + "/logs";
  fs::create_directories(log_dir);
  const std::string cmd =
      "env -u DEEPTALK_CONFIG -u DEEPTALK_SEED -u DEEPTALK_OUT_DIR "
      "\"" DEEPTALK_CLI_PATH "\" " +
      args + " >>" + log_dir + "/stdout.txt 2>>" + log_dir + "/stderr.txt";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string SlurpBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void RunPipeline(const std::string& dir) {
  const std::string corpus = dir + "/corpus";
  auto run = [&](const std::string& args) {
    Require(RunTool(args + " --deterministic") == 0,
            "pipeline command failed: " + args);
  };
  run("synth-corpus --out-dir " + corpus +
      " --speakers 6 --utts 6 --utt-seconds 2 --seed 777");
  run("train --manifest " + corpus + "/manifest.tsv --out-dir " + dir +
      "/model --epochs 3 --batch 8 --steps-per-epoch 4 --crop-seconds 0.5"
      " --frontend-kernels 7,5,5,3 --frontend-channels 8,16,16,16"
      " --frontend-strides 4,2,2,1 --ref-kernels 3,3 --ref-channels 8,8"
      " --ref-strides 2,2 --gru-hidden 16 --tokens 4 --seed 778");
  const std::string ckpt = dir + "/model/model.ckpt";
  run("embed --manifest " + corpus + "/manifest.tsv --checkpoint " + ckpt +
      " --out " + dir + "/emb_deeptalk.tsv --split eval --condition clean"
      " --system deeptalk --seed 779");
  run("embed --manifest " + corpus + "/manifest.tsv --checkpoint " + ckpt +
      " --out " + dir + "/emb_frontend.tsv --split eval --condition clean"
      " --system frontend --seed 779");
  run("score --embeddings " + dir + "/emb_deeptalk.tsv --trials " + corpus +
      "/trials_clean.tsv --out " + dir + "/scores_deeptalk.tsv"
      " --system-id deeptalk --seed 780");
  run("score --embeddings " + dir + "/emb_frontend.tsv --trials " + corpus +
      "/trials_clean.tsv --out " + dir + "/scores_frontend.tsv"
      " --system-id frontend --seed 780");
  run("evaluate --scores " + dir + "/scores_deeptalk.tsv --trials " + corpus +
      "/trials_clean.tsv --out-dir " + dir + "/eval --seed 781");
  run("fuse --scores-a " + dir + "/scores_frontend.tsv --scores-b " + dir +
      "/scores_deeptalk.tsv --trials " + corpus + "/trials_clean.tsv --out " +
      dir + "/scores_fused.tsv --seed 782");
}

// Two identical seeded pipeline runs through the installed command line must
// produce byte-identical artifacts end to end.
CheckResult CheckDeterminism() {
  const std::string base = std::string(kScratch) + "/determinism";
  const std::string r1 = base + "/run1";
  const std::string r2 = base + "/run2";
  RunPipeline(r1);
  RunPipeline(r2);

  std::vector<std::string> rel_paths = {
      "corpus/manifest.tsv", "model/model.ckpt",      "model/loss_log.tsv",
      "emb_deeptalk.tsv",    "emb_frontend.tsv",      "scores_deeptalk.tsv",
      "scores_frontend.tsv", "eval/report_deeptalk.tsv",
      "eval/det_deeptalk.tsv", "scores_fused.tsv",
  };
  std::vector<std::string> wavs;
  for (const auto& entry : fs::directory_iterator(r1 + "/corpus/wav"))
    wavs.push_back("corpus/wav/" + entry.path().filename().string());
  std::sort(wavs.begin(), wavs.end());
  rel_paths.insert(rel_paths.end(), wavs.begin(), wavs.end());

  int compared = 0;
  std::string first_mismatch;
  for (const std::string& rel : rel_paths) {
    if (SlurpBytes(r1 + "/" + rel) != SlurpBytes(r2 + "/" + rel)) {
      if (first_mismatch.empty()) first_mismatch = rel;
    }
    ++compared;
  }
  CheckResult r;
  r.pass = first_mismatch.empty();
  r.detail = "files_compared=" + std::to_string(compared) +
             (r.pass ? " all_identical"
                     : " first_mismatch=" + first_mismatch);
  return r;
}

int Main() {
  const auto start = Clock::now();
  fs::remove_all(kScratch);
  fs::create_directories(kScratch);

  RunCheck(1, "metric_oracle_equivalence", CheckMetricOracle);
  RunCheck(2, "gradient_check", CheckGradients);
  RunCheck(3, "attention_invariants", CheckAttentionInvariants);
  RunCheck(4, "desk_scale_discrimination", CheckDeskScaleDiscrimination);

  std::vector<ConditionOutcome> condition_runs;
  RunCheck(5, "fusion_benefit", [&] {
    condition_runs = RunConditionSeeds();
    return CheckFusionBenefit(condition_runs);
  });
  RunCheck(6, "f0_fidelity", CheckF0Fidelity);
  RunCheck(7, "determinism", CheckDeterminism);
  RunCheck(8, "degradation_ordering", [&] {
    Require(!condition_runs.empty(), "condition runs unavailable");
    return CheckDegradationOrdering(condition_runs);
  });

  std::cout << "ACCEPTANCE: " << (8 - g_failures) << "/8 criteria passed ("
            << Fmt("%.0f", SecondsSince(start)) << " s total)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace deeptalk

int main() { return deeptalk::Main(); }
