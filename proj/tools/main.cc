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

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "deeptalk/analysis/embedding_space.h"
#include "deeptalk/analysis/pitch.h"
#include "deeptalk/analysis/spectrogram.h"
#include "deeptalk/audio/corpus.h"
#include "deeptalk/audio/synth.h"
#include "deeptalk/audio/wav_io.h"
#include "deeptalk/common/require.h"
#include "deeptalk/common/tsv.h"
#include "deeptalk/style/embedder.h"
#include "deeptalk/trainer/checkpoint.h"
#include "deeptalk/trainer/trainer.h"
#include "deeptalk/verification/fusion.h"
#include "deeptalk/verification/metrics.h"
#include "deeptalk/verification/trials.h"

namespace deeptalk {
namespace {

constexpr uint64_t kTagTrialsClean = 51;
constexpr uint64_t kTagTrialsDegraded = 52;

void LogResolvedConfig(const CLI::App* sub) {
  std::cerr << "# resolved config: " << sub->get_name() << "\n"
            << sub->config_to_str(true, false);
}

void WriteSeedSidecar(const std::string& path, uint64_t seed) {
  WriteTextFile(path + ".meta", "seed = " + std::to_string(seed) + "\n");
}

std::string SafeFileToken(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

bool EntrySelected(const ManifestEntry& e, const std::string& split,
                   const std::string& condition) {
  return (split == "all" || e.split == split) &&
         (condition == "all" || e.condition == condition);
}

struct CommonFlags {
  uint64_t seed = 0;
  bool deterministic = false;
  std::string config_path;
};

void AddCommonFlags(CLI::App* sub, CommonFlags* flags) {
  sub->add_option("--config", flags->config_path,
                  "Flat key = value configuration file; command-line flags "
                  "and environment variables take precedence")
      ->envname("DEEPTALK_CONFIG");
  sub->add_option("--seed", flags->seed, "Root seed for this run")
      ->envname("DEEPTALK_SEED")
      ->capture_default_str();
  sub->add_flag("--deterministic", flags->deterministic,
                "Accepted for compatibility; execution is always "
                "single-threaded and deterministic");
}

// Command-line usage errors raised outside CLI11's own parser, such as a bad
// configuration file. They exit with the same status as flag parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string TrimWhitespace(const std::string& s) {
  const char* kWs = " \t\r";
  const size_t b = s.find_first_not_of(kWs);
  if (b == std::string::npos) return std::string();
  const size_t e = s.find_last_not_of(kWs);
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> ReadFlatConfig(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = TrimWhitespace(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError(where + ": expected key = value");
    const std::string key = TrimWhitespace(stripped.substr(0, eq));
    std::string value = TrimWhitespace(stripped.substr(eq + 1));
    if (key.empty()) throw UsageError(where + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!seen.insert(key).second)
      throw UsageError(where + ": duplicate key '" + key + "'");
    entries.emplace_back(key, value);
  }
  return entries;
}

// Returns the subcommand the config keys should bind to, or null when the
// command line does not name one (help, version, or missing subcommand).
const CLI::App* FindLeafSubcommand(const CLI::App& app,
                                   const std::vector<std::string>& args,
                                   std::string* display_name) {
  if (args.empty() || args[0].empty() || args[0][0] == '-') return nullptr;
  const CLI::App* leaf = app.get_subcommand_no_throw(args[0]);
  if (leaf == nullptr) return nullptr;
  *display_name = args[0];
  if (!leaf->get_subcommands({}).empty()) {
    for (size_t i = 1; i < args.size(); ++i) {
      if (args[i].empty() || args[i][0] == '-') continue;
      const CLI::App* inner = leaf->get_subcommand_no_throw(args[i]);
      if (inner != nullptr) {
        *display_name += " " + args[i];
        return inner;
      }
      return nullptr;
    }
    return nullptr;
  }
  return leaf;
}

// CLI11 only reads config files attached to the top-level command, so
// subcommand config files are expanded here before parsing: each key that the
// command line and environment leave unset is appended as a --key=value
// token. Unknown keys are rejected.
void ApplyConfigFile(const CLI::App& app, std::vector<std::string>* args) {
  std::string path;
  for (size_t i = 0; i < args->size(); ++i) {
    const std::string& tok = (*args)[i];
    if (tok == "--config" && i + 1 < args->size()) path = (*args)[i + 1];
    if (tok.rfind("--config=", 0) == 0) path = tok.substr(9);
  }
  if (path.empty()) {
    const char* env = std::getenv("DEEPTALK_CONFIG");
    if (env != nullptr && env[0] != '\0') path = env;
  }
  if (path.empty()) return;

  std::string display;
  const CLI::App* leaf = FindLeafSubcommand(app, *args, &display);
  if (leaf == nullptr) return;

  for (const auto& [key, value] : ReadFlatConfig(path)) {
    if (key == "config" || key == "help")
      throw UsageError("config key '" + key +
                       "' is not allowed in a config file");
    const std::string flag = "--" + key;
    const CLI::Option* opt = leaf->get_option_no_throw(flag);
    if (opt == nullptr)
      throw UsageError("unknown config key '" + key + "' for " + display);
    bool overridden = false;
    for (const std::string& tok : *args) {
      if (tok == flag || tok.rfind(flag + "=", 0) == 0) {
        overridden = true;
        break;
      }
    }
    if (!overridden && !opt->get_envname().empty()) {
      const char* env = std::getenv(opt->get_envname().c_str());
      if (env != nullptr && env[0] != '\0') overridden = true;
    }
    if (!overridden) args->push_back(flag + "=" + value);
  }
}

struct SynthCorpusArgs {
  CommonFlags common;
  CorpusConfig cfg;
};

void RunSynthCorpus(const SynthCorpusArgs& a) {
  CorpusConfig cfg = a.cfg;
  cfg.seed = a.common.seed;
  const CorpusManifest manifest = BuildCorpus(cfg);

  for (const std::string condition : {"clean", "degraded"}) {
    std::vector<TrialUtt> utts;
    for (const ManifestEntry& e : manifest.entries) {
      if (e.split == "eval" && e.condition == condition) {
        utts.push_back({UtteranceId(e.path), e.speaker_id});
      }
    }
    const uint64_t tag =
        condition == std::string("clean") ? kTagTrialsClean
                                          : kTagTrialsDegraded;
    const std::vector<Trial> trials =
        MakeTrials(utts, DeriveSeed(cfg.seed, tag));
    const std::string path =
        cfg.out_dir + "/trials_" + condition + ".tsv";
    WriteTrials(path, trials);
    WriteSeedSidecar(path, cfg.seed);
    std::cout << path << ": " << trials.size() << " trials\n";
  }
  std::cout << cfg.out_dir << "/manifest.tsv: " << manifest.entries.size()
            << " files\n";
}

struct TrainArgs {
  CommonFlags common;
  std::string manifest_path;
  std::string out_dir;
  TrainConfig cfg;
  std::vector<int> frontend_kernels = {7, 5, 5, 3};
  std::vector<int> frontend_channels = {16, 32, 32, 40};
  std::vector<int> frontend_strides = {4, 2, 2, 1};
  std::vector<int> ref_kernels = {3, 3, 3, 3};
  std::vector<int> ref_channels = {16, 16, 32, 32};
  std::vector<int> ref_strides = {2, 2, 2, 2};
  int gru_hidden = 128;
  int num_tokens = 10;
};

EmbedderOptions BuildEmbedderOptions(const TrainArgs& a) {
  Require(a.frontend_kernels.size() == a.frontend_channels.size() &&
              a.frontend_kernels.size() == a.frontend_strides.size(),
          "frontend kernel, channel, and stride lists must have equal "
          "lengths");
  Require(a.ref_kernels.size() == a.ref_channels.size() &&
              a.ref_kernels.size() == a.ref_strides.size(),
          "reference encoder kernel, channel, and stride lists must have "
          "equal lengths");
  EmbedderOptions opts;
  opts.frontend.clear();
  for (size_t i = 0; i < a.frontend_kernels.size(); ++i) {
    opts.frontend.push_back({a.frontend_kernels[i], a.frontend_channels[i],
                             a.frontend_strides[i]});
  }
  opts.ref_conv.clear();
  for (size_t i = 0; i < a.ref_kernels.size(); ++i) {
    opts.ref_conv.push_back(
        {a.ref_kernels[i], a.ref_channels[i], a.ref_strides[i]});
  }
  opts.gru_hidden = a.gru_hidden;
  opts.num_tokens = a.num_tokens;
  opts.l2_normalize = true;
  return opts;
}

void RunTrain(const TrainArgs& a) {
  TrainConfig cfg = a.cfg;
  cfg.seed = a.common.seed;
  const EmbedderOptions opts = BuildEmbedderOptions(a);
  const CorpusManifest manifest = LoadManifest(a.manifest_path);
  const TrainResult result =
      TrainLoop(opts, cfg, manifest, a.manifest_path, a.out_dir);
  std::cout << a.out_dir << "/model.ckpt: " << cfg.epochs << " epochs, "
            << "first epoch mean loss "
            << FormatReal(result.stats.first_epoch_mean_loss)
            << ", last epoch mean loss "
            << FormatReal(result.stats.last_epoch_mean_loss) << "\n";
}

struct EmbedArgs {
  CommonFlags common;
  std::string manifest_path;
  std::string checkpoint_path;
  std::string out_path;
  std::string weights_out;
  std::string split = "all";
  std::string condition = "all";
  std::string system = "deeptalk";
};

void RunEmbed(const EmbedArgs& a) {
  const LoadedCheckpoint ckpt = LoadCheckpoint(a.checkpoint_path);
  const CorpusManifest manifest = LoadManifest(a.manifest_path);

  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
  std::vector<std::pair<std::string, Eigen::VectorXd>> weight_rows;
  std::set<std::string> ids;
  for (const ManifestEntry& e : manifest.entries) {
    if (!EntrySelected(e, a.split, a.condition)) continue;
    const std::string id = UtteranceId(e.path);
    Require(ids.insert(id).second, "duplicate utterance id " + id);
    const Waveform w = LoadWav(ResolveManifestPath(a.manifest_path, e.path));
    if (a.system == "deeptalk") {
      const DeepTalkEmbedding emb = EmbedWaveform(ckpt.model, w);
      rows.emplace_back(id, emb.vector);
      weight_rows.emplace_back(id, emb.weights);
    } else {
      rows.emplace_back(id, FrontendEmbed(ckpt.model, w));
    }
  }
  Require(!rows.empty(), "no manifest entries match split " + a.split +
                             " and condition " + a.condition);

  WriteEmbeddings(a.out_path, rows);
  WriteSeedSidecar(a.out_path, a.common.seed);
  if (!a.weights_out.empty()) {
    Require(a.system == "deeptalk",
            "attention weights are only produced by the deeptalk system");
    WriteEmbeddings(a.weights_out, weight_rows);
    WriteSeedSidecar(a.weights_out, a.common.seed);
  }
  std::cout << a.out_path << ": " << rows.size() << " embeddings ("
            << a.system << ")\n";
}

struct ScoreArgs {
  CommonFlags common;
  std::string embeddings_path;
  std::string trials_path;
  std::string out_path;
  std::string system_id;
};

void RunScore(const ScoreArgs& a) {
  const std::map<std::string, Eigen::VectorXd> embeddings =
      ToEmbeddingMap(ReadEmbeddings(a.embeddings_path));
  const std::vector<Trial> trials = ReadTrials(a.trials_path);
  const ScoreSet scores = ScoreTrials(trials, embeddings, a.system_id);
  WriteScores(a.out_path, {scores});
  WriteSeedSidecar(a.out_path, a.common.seed);
  std::cout << a.out_path << ": " << scores.trials.size() << " scores ("
            << a.system_id << ")\n";
}

struct EvaluateArgs {
  CommonFlags common;
  std::string scores_path;
  std::string trials_path;
  std::string out_dir;
  DcfConfig dcf;
};

void RunEvaluate(const EvaluateArgs& a) {
  const std::vector<Trial> trials = ReadTrials(a.trials_path);
  const std::vector<ScoreSet> sets = ReadScoreSets(a.scores_path, trials);
  std::filesystem::create_directories(a.out_dir);
  for (const ScoreSet& s : sets) {
    const VerificationReport report = Evaluate(s, a.dcf);
    const std::string token = SafeFileToken(s.system_id);
    const std::string report_path = a.out_dir + "/report_" + token + ".tsv";
    const std::string det_path = a.out_dir + "/det_" + token + ".tsv";
    WriteReport(report_path, report);
    WriteSeedSidecar(report_path, a.common.seed);
    WriteDetTsv(det_path, report.det);
    WriteSeedSidecar(det_path, a.common.seed);
    std::cout << s.system_id << "\teer=" << FormatReal(report.eer)
              << "\ttmr_at_fmr1=" << FormatReal(report.tmr_at_fmr1)
              << "\tmin_dcf_normalized="
              << FormatReal(report.min_dcf.normalized) << "\n";
  }
}

struct FuseArgs {
  CommonFlags common;
  std::string scores_a_path;
  std::string scores_b_path;
  std::string trials_path;
  std::string out_path;
  double w_a = 1.0;
  double w_b = 3.0;
  bool skip_znorm = false;
};

ScoreSet ReadSingleSystem(const std::string& path,
                          const std::vector<Trial>& trials) {
  const std::vector<ScoreSet> sets = ReadScoreSets(path, trials);
  std::string ids;
  for (const ScoreSet& s : sets) {
    ids += (ids.empty() ? "" : ", ") + s.system_id;
  }
  Require(sets.size() == 1, path + ": expected exactly one system, found " +
                                std::to_string(sets.size()) + " (" + ids +
                                ")");
  return sets[0];
}

void RunFuse(const FuseArgs& a) {
  const std::vector<Trial> trials = ReadTrials(a.trials_path);
  ScoreSet sa = ReadSingleSystem(a.scores_a_path, trials);
  ScoreSet sb = ReadSingleSystem(a.scores_b_path, trials);
  if (!a.skip_znorm) {
    sa = ZNorm(sa);
    sb = ZNorm(sb);
  }
  const ScoreSet fused = Fuse(sa, sb, a.w_a, a.w_b);
  WriteScores(a.out_path, {fused});
  WriteSeedSidecar(a.out_path, a.common.seed);
  std::cout << a.out_path << ": fused " << sa.system_id << " (w="
            << FormatReal(a.w_a) << ") with " << sb.system_id << " (w="
            << FormatReal(a.w_b) << ")\n";
}

struct SpectrogramArgs {
  CommonFlags common;
  std::string wav_path;
  std::string out_tsv;
  std::string render_path;
  bool overlay_f0 = false;
};

void RunSpectrogram(const SpectrogramArgs& a) {
  Require(!a.out_tsv.empty() || !a.render_path.empty(),
          "nothing to do: pass --out-tsv or --render");
  const Waveform w = LoadWav(a.wav_path);
  const Spectrogram s = ComputeSpectrogram(w);
  if (!a.out_tsv.empty()) {
    WriteSpectrogramTsv(a.out_tsv, s);
    WriteSeedSidecar(a.out_tsv, a.common.seed);
  }
  if (!a.render_path.empty()) {
    F0Contour f0;
    if (a.overlay_f0) f0 = EstimateF0(w);
    RenderSpectrogramPpm(a.render_path, s, a.overlay_f0 ? &f0 : nullptr);
    WriteSeedSidecar(a.render_path, a.common.seed);
  }
  std::cout << a.wav_path << ": " << s.db.rows() << " frames x "
            << s.db.cols() << " bins\n";
}

struct F0Args {
  CommonFlags common;
  std::string wav_path;
  std::string out_path;
};

void RunF0(const F0Args& a) {
  const Waveform w = LoadWav(a.wav_path);
  const F0Contour c = EstimateF0(w);
  WriteF0Tsv(a.out_path, c);
  WriteSeedSidecar(a.out_path, a.common.seed);
  int voiced = 0;
  for (const F0Frame& f : c.frames) voiced += f.voiced ? 1 : 0;
  std::cout << a.out_path << ": " << c.frames.size() << " frames, " << voiced
            << " voiced\n";
}

struct F0CompareArgs {
  CommonFlags common;
  std::string wav_a;
  std::string wav_b;
  std::string out_path;
};

void RunF0Compare(const F0CompareArgs& a) {
  const F0Contour ca = EstimateF0(LoadWav(a.wav_a));
  const F0Contour cb = EstimateF0(LoadWav(a.wav_b));
  const F0Similarity sim = CompareF0(ca, cb);
  std::string out;
  out += "pearson_r\t" + FormatReal(sim.pearson_r) + "\n";
  out += "voiced_overlap\t" + FormatReal(sim.voiced_overlap) + "\n";
  WriteTextFile(a.out_path, out);
  WriteSeedSidecar(a.out_path, a.common.seed);
  std::cout << "pearson_r=" << FormatReal(sim.pearson_r)
            << "\tvoiced_overlap=" << FormatReal(sim.voiced_overlap) << "\n";
}

struct DistancesArgs {
  CommonFlags common;
  std::string embeddings_path;
  std::string manifest_path;
  std::string out_path;
};

void RunDistances(const DistancesArgs& a) {
  const CorpusManifest manifest = LoadManifest(a.manifest_path);
  std::map<std::string, std::string> speaker_of;
  for (const ManifestEntry& e : manifest.entries) {
    speaker_of[UtteranceId(e.path)] = e.speaker_id;
  }
  std::vector<std::pair<std::string, Eigen::VectorXd>> labeled;
  for (auto& [id, vec] : ReadEmbeddings(a.embeddings_path)) {
    const auto it = speaker_of.find(id);
    Require(it != speaker_of.end(),
            "utterance " + id + " is not in the manifest");
    labeled.emplace_back(it->second, std::move(vec));
  }
  const DistanceReport report = ComputeDistanceReport(labeled);
  WriteDistanceReportTsv(a.out_path, report);
  WriteSeedSidecar(a.out_path, a.common.seed);
  std::cout << "grand_mean_intra=" << FormatReal(report.grand_mean_intra)
            << "\tgrand_mean_inter=" << FormatReal(report.grand_mean_inter)
            << "\n";
}

struct ProjectArgs {
  CommonFlags common;
  std::string embeddings_path;
  std::string out_path;
};

void RunProject(const ProjectArgs& a) {
  const std::vector<std::pair<std::string, Eigen::VectorXd>> rows =
      ReadEmbeddings(a.embeddings_path);
  std::vector<std::string> ids;
  std::vector<Eigen::VectorXd> vecs;
  for (const auto& [id, vec] : rows) {
    ids.push_back(id);
    vecs.push_back(vec);
  }
  const Eigen::MatrixXd coords = Project2d(vecs);
  WriteProjectionTsv(a.out_path, ids, coords);
  WriteSeedSidecar(a.out_path, a.common.seed);
  std::cout << a.out_path << ": " << coords.rows() << " points\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"Speaker embedding toolkit: synthetic corpus generation, "
               "vocal-style embedder training, verification scoring and "
               "fusion, and spectrogram/F0 analysis."};
  app.require_subcommand(1);

  SynthCorpusArgs synth;
  CLI::App* synth_sub = app.add_subcommand(
      "synth-corpus", "Generate a deterministic synthetic speaker corpus");
  AddCommonFlags(synth_sub, &synth.common);
  synth_sub->add_option("--out-dir", synth.cfg.out_dir,
                        "Directory for WAVs, manifest, and trial lists")
      ->required()
      ->envname("DEEPTALK_OUT_DIR");
  synth_sub->add_option("--speakers", synth.cfg.n_speakers,
                        "Speaker count (half train, half eval)")
      ->capture_default_str();
  synth_sub->add_option("--utts", synth.cfg.utts_per_speaker,
                        "Utterances per speaker")
      ->capture_default_str();
  synth_sub->add_option("--utt-seconds", synth.cfg.utt_seconds,
                        "Utterance duration in seconds")
      ->capture_default_str();
  synth_sub->add_option("--snr-db", synth.cfg.snr_db,
                        "SNR of the degraded condition")
      ->capture_default_str();
  synth_sub->callback([&] {
    LogResolvedConfig(synth_sub);
    RunSynthCorpus(synth);
  });

  TrainArgs train;
  CLI::App* train_sub =
      app.add_subcommand("train", "Train the vocal-style embedder");
  AddCommonFlags(train_sub, &train.common);
  train_sub->add_option("--manifest", train.manifest_path, "Corpus manifest")
      ->required();
  train_sub->add_option("--out-dir", train.out_dir,
                        "Directory for model.ckpt and loss_log.tsv")
      ->required()
      ->envname("DEEPTALK_OUT_DIR");
  train_sub->add_option("--epochs", train.cfg.epochs, "Training epochs")
      ->capture_default_str();
  train_sub->add_option("--margin", train.cfg.margin, "Triplet margin")
      ->capture_default_str();
  train_sub
      ->add_option("--learning-rate", train.cfg.learning_rate,
                   "Optimizer learning rate")
      ->capture_default_str();
  train_sub
      ->add_option("--batch", train.cfg.triplets_per_batch,
                   "Triplets per step")
      ->capture_default_str();
  train_sub->add_option("--mining", train.cfg.mining, "Negative mining mode")
      ->check(CLI::IsMember({"random", "semi-hard"}))
      ->capture_default_str();
  train_sub
      ->add_option("--semi-hard-start", train.cfg.semi_hard_start_epoch,
                   "First epoch that mines semi-hard negatives")
      ->capture_default_str();
  train_sub
      ->add_option("--crop-seconds", train.cfg.crop_seconds,
                   "Per-step training view of each utterance")
      ->capture_default_str();
  train_sub
      ->add_option("--steps-per-epoch", train.cfg.steps_per_epoch,
                   "Steps per epoch; 0 derives from corpus size")
      ->capture_default_str();
  train_sub
      ->add_option("--negative-pool", train.cfg.negative_pool,
                   "Candidate pool size for semi-hard mining")
      ->capture_default_str();
  train_sub
      ->add_option("--frontend-kernels", train.frontend_kernels,
                   "Frontend conv kernel widths")
      ->delimiter(',')
      ->capture_default_str();
  train_sub
      ->add_option("--frontend-channels", train.frontend_channels,
                   "Frontend conv channel counts")
      ->delimiter(',')
      ->capture_default_str();
  train_sub
      ->add_option("--frontend-strides", train.frontend_strides,
                   "Frontend conv strides")
      ->delimiter(',')
      ->capture_default_str();
  train_sub
      ->add_option("--ref-kernels", train.ref_kernels,
                   "Reference encoder conv kernel sizes")
      ->delimiter(',')
      ->capture_default_str();
  train_sub
      ->add_option("--ref-channels", train.ref_channels,
                   "Reference encoder conv channel counts")
      ->delimiter(',')
      ->capture_default_str();
  train_sub
      ->add_option("--ref-strides", train.ref_strides,
                   "Reference encoder conv strides")
      ->delimiter(',')
      ->capture_default_str();
  train_sub->add_option("--gru-hidden", train.gru_hidden,
                        "GRU state width; also the embedding dimension")
      ->capture_default_str();
  train_sub->add_option("--tokens", train.num_tokens, "Style token count")
      ->capture_default_str();
  train_sub->callback([&] {
    LogResolvedConfig(train_sub);
    RunTrain(train);
  });

  EmbedArgs embed;
  CLI::App* embed_sub = app.add_subcommand(
      "embed", "Embed manifest utterances with a trained checkpoint");
  AddCommonFlags(embed_sub, &embed.common);
  embed_sub->add_option("--manifest", embed.manifest_path, "Corpus manifest")
      ->required();
  embed_sub
      ->add_option("--checkpoint", embed.checkpoint_path,
                   "Trained model checkpoint")
      ->required();
  embed_sub->add_option("--out", embed.out_path, "Embedding table output")
      ->required();
  embed_sub
      ->add_option("--weights-out", embed.weights_out,
                   "Optional attention weight table output")
      ->capture_default_str();
  embed_sub->add_option("--split", embed.split, "Manifest split filter")
      ->check(CLI::IsMember({"train", "eval", "all"}))
      ->capture_default_str();
  embed_sub
      ->add_option("--condition", embed.condition,
                   "Manifest condition filter")
      ->check(CLI::IsMember({"clean", "degraded", "all"}))
      ->capture_default_str();
  embed_sub->add_option("--system", embed.system, "Embedding system")
      ->check(CLI::IsMember({"deeptalk", "frontend"}))
      ->capture_default_str();
  embed_sub->callback([&] {
    LogResolvedConfig(embed_sub);
    RunEmbed(embed);
  });

  ScoreArgs score;
  CLI::App* score_sub =
      app.add_subcommand("score", "Score trials with cosine similarity");
  AddCommonFlags(score_sub, &score.common);
  score_sub
      ->add_option("--embeddings", score.embeddings_path, "Embedding table")
      ->required();
  score_sub->add_option("--trials", score.trials_path, "Trial list")
      ->required();
  score_sub->add_option("--out", score.out_path, "Score file output")
      ->required();
  score_sub
      ->add_option("--system-id", score.system_id,
                   "System id recorded with every score")
      ->required();
  score_sub->callback([&] {
    LogResolvedConfig(score_sub);
    RunScore(score);
  });

  EvaluateArgs evaluate;
  CLI::App* eval_sub = app.add_subcommand(
      "evaluate", "Compute DET, EER, TMR@FMR=1%, and minDCF per system");
  AddCommonFlags(eval_sub, &evaluate.common);
  eval_sub->add_option("--scores", evaluate.scores_path, "Score file")
      ->required();
  eval_sub->add_option("--trials", evaluate.trials_path, "Trial list")
      ->required();
  eval_sub
      ->add_option("--out-dir", evaluate.out_dir,
                   "Directory for report and DET files")
      ->required()
      ->envname("DEEPTALK_OUT_DIR");
  eval_sub->add_option("--p-tar", evaluate.dcf.p_tar, "Target prior")
      ->capture_default_str();
  eval_sub->add_option("--c-miss", evaluate.dcf.c_miss, "Miss cost")
      ->capture_default_str();
  eval_sub->add_option("--c-fa", evaluate.dcf.c_fa, "False alarm cost")
      ->capture_default_str();
  eval_sub->callback([&] {
    LogResolvedConfig(eval_sub);
    RunEvaluate(evaluate);
  });

  FuseArgs fuse;
  CLI::App* fuse_sub = app.add_subcommand(
      "fuse", "Fuse two systems' scores by a weighted mean");
  AddCommonFlags(fuse_sub, &fuse.common);
  fuse_sub->add_option("--scores-a", fuse.scores_a_path,
                       "First system's score file")
      ->required();
  fuse_sub->add_option("--scores-b", fuse.scores_b_path,
                       "Second system's score file")
      ->required();
  fuse_sub->add_option("--trials", fuse.trials_path, "Trial list")
      ->required();
  fuse_sub->add_option("--out", fuse.out_path, "Fused score file output")
      ->required();
  fuse_sub->add_option("--w-a", fuse.w_a, "Weight of system A")
      ->capture_default_str();
  fuse_sub->add_option("--w-b", fuse.w_b, "Weight of system B")
      ->capture_default_str();
  fuse_sub->add_flag("--skip-znorm", fuse.skip_znorm,
                     "Fuse raw scores without z-normalization");
  fuse_sub->callback([&] {
    LogResolvedConfig(fuse_sub);
    RunFuse(fuse);
  });

  CLI::App* analyze =
      app.add_subcommand("analyze", "Spectrogram, F0, and embedding-space "
                         "analyses");
  analyze->require_subcommand(1);

  SpectrogramArgs spect;
  CLI::App* spect_sub = analyze->add_subcommand(
      "spectrogram", "dB spectrogram, optionally rendered with F0 overlay");
  AddCommonFlags(spect_sub, &spect.common);
  spect_sub->add_option("--wav", spect.wav_path, "Input WAV")->required();
  spect_sub->add_option("--out-tsv", spect.out_tsv, "Spectrogram TSV output")
      ->capture_default_str();
  spect_sub->add_option("--render", spect.render_path, "PPM image output")
      ->capture_default_str();
  spect_sub->add_flag("--overlay-f0", spect.overlay_f0,
                      "Overlay the estimated F0 contour on the rendering");
  spect_sub->callback([&] {
    LogResolvedConfig(spect_sub);
    RunSpectrogram(spect);
  });

  F0Args f0;
  CLI::App* f0_sub =
      analyze->add_subcommand("f0", "Estimate the F0 contour of a WAV");
  AddCommonFlags(f0_sub, &f0.common);
  f0_sub->add_option("--wav", f0.wav_path, "Input WAV")->required();
  f0_sub->add_option("--out", f0.out_path, "Contour TSV output")->required();
  f0_sub->callback([&] {
    LogResolvedConfig(f0_sub);
    RunF0(f0);
  });

  F0CompareArgs f0cmp;
  CLI::App* f0cmp_sub = analyze->add_subcommand(
      "f0-compare", "Pearson correlation of two WAVs' F0 contours");
  AddCommonFlags(f0cmp_sub, &f0cmp.common);
  f0cmp_sub->add_option("--wav-a", f0cmp.wav_a, "First WAV")->required();
  f0cmp_sub->add_option("--wav-b", f0cmp.wav_b, "Second WAV")->required();
  f0cmp_sub->add_option("--out", f0cmp.out_path, "Similarity TSV output")
      ->required();
  f0cmp_sub->callback([&] {
    LogResolvedConfig(f0cmp_sub);
    RunF0Compare(f0cmp);
  });

  DistancesArgs dist;
  CLI::App* dist_sub = analyze->add_subcommand(
      "distances", "Intra/inter speaker embedding distance report");
  AddCommonFlags(dist_sub, &dist.common);
  dist_sub->add_option("--embeddings", dist.embeddings_path,
                       "Embedding table")
      ->required();
  dist_sub->add_option("--manifest", dist.manifest_path,
                       "Manifest supplying speaker labels")
      ->required();
  dist_sub->add_option("--out", dist.out_path, "Distance report output")
      ->required();
  dist_sub->callback([&] {
    LogResolvedConfig(dist_sub);
    RunDistances(dist);
  });

  ProjectArgs project;
  CLI::App* project_sub = analyze->add_subcommand(
      "project", "Project embeddings onto their top two principal "
      "directions");
  AddCommonFlags(project_sub, &project.common);
  project_sub->add_option("--embeddings", project.embeddings_path,
                          "Embedding table")
      ->required();
  project_sub->add_option("--out", project.out_path, "Coordinate TSV output")
      ->required();
  project_sub->callback([&] {
    LogResolvedConfig(project_sub);
    RunProject(project);
  });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    ApplyConfigFile(app, &args);
    std::vector<const char*> cargs;
    cargs.reserve(args.size() + 1);
    cargs.push_back(argv[0]);
    for (const std::string& arg : args) cargs.push_back(arg.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace deeptalk

int main(int argc, char** argv) { return deeptalk::Main(argc, argv); }
