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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "deeptalk/common/tsv.h"
#include "doctest.h"

namespace deeptalk {
namespace {

namespace fs = std::filesystem;

const char kScratch[] = "cli_scratch";

struct CommandResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the toolkit binary through the shell with a scrubbed environment so
// that ambient DEEPTALK_* variables cannot leak into the test. extra_env is
// spliced in front of the binary ("DEEPTALK_SEED=7").
CommandResult RunCli(const std::string& args,
                     const std::string& extra_env = "") {
  fs::create_directories(kScratch);
  const std::string out_path = std::string(kScratch) + "/cmd_stdout.txt";
  const std::string err_path = std::string(kScratch) + "/cmd_stderr.txt";
  std::string cmd = "env -u DEEPTALK_CONFIG -u DEEPTALK_SEED"
                    " -u DEEPTALK_OUT_DIR ";
  if (!extra_env.empty()) cmd += extra_env + " ";
  cmd += "\"" DEEPTALK_CLI_PATH "\" " + args;
  cmd += " >" + out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  CommandResult result;
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = Slurp(out_path);
  result.err = Slurp(err_path);
  return result;
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit with status two") {
  CHECK(RunCli("").status == 2);
  CHECK(RunCli("frobnicate").status == 2);
  CHECK(RunCli("train --manifest m.tsv --out-dir d --bogus 3").status == 2);
  CHECK(RunCli("score --embeddings only.tsv").status == 2);
  CHECK(RunCli("synth-corpus --out-dir x --speakers notanumber").status == 2);
}

TEST_CASE("help prints the command list and exits cleanly") {
  const CommandResult r = RunCli("--help");
  CHECK(r.status == 0);
  CHECK(Contains(r.out, "synth-corpus"));
  CHECK(Contains(r.out, "evaluate"));
  CHECK(Contains(r.out, "analyze"));
}

TEST_CASE("config files are validated and obey precedence") {
  fs::remove_all(kScratch);
  fs::create_directories(kScratch);
  const std::string scratch(kScratch);

  const std::string bad_cfg = scratch + "/bad.cfg";
  WriteTextFile(bad_cfg, "bogus_key = 1\n");
  const CommandResult bad = RunCli(
      "train --manifest m.tsv --out-dir " + scratch + " --config " + bad_cfg);
  CHECK(bad.status == 2);
  CHECK(Contains(bad.err, "unknown config key 'bogus_key'"));

  const CommandResult missing = RunCli(
      "train --manifest m.tsv --out-dir " + scratch +
      " --config /nonexistent.cfg");
  CHECK(missing.status == 2);
  CHECK(Contains(missing.err, "cannot open config file"));

  const std::string mal_cfg = scratch + "/malformed.cfg";
  WriteTextFile(mal_cfg, "epochs\n");
  const CommandResult mal = RunCli(
      "train --manifest m.tsv --out-dir " + scratch + " --config " + mal_cfg);
  CHECK(mal.status == 2);
  CHECK(Contains(mal.err, "expected key = value"));

  const CommandResult corpus = RunCli(
      "synth-corpus --out-dir " + scratch +
      "/cfg_corpus --speakers 4 --utts 2 --utt-seconds 1.2 --seed 90");
  REQUIRE(corpus.status == 0);

  const std::string tiny_arch =
      " --frontend-kernels 7,4 --frontend-channels 4,8"
      " --frontend-strides 4,2 --ref-kernels 3,3 --ref-channels 4,4"
      " --ref-strides 2,2 --gru-hidden 8 --tokens 4 --batch 4"
      " --crop-seconds 0.5";
  const std::string train_base =
      "train --manifest " + scratch + "/cfg_corpus/manifest.tsv" + tiny_arch;

  const std::string good_cfg = scratch + "/good.cfg";
  WriteTextFile(good_cfg,
                "# training length\nepochs = 1\nsteps-per-epoch = 1\n"
                "seed = 111\n");
  const CommandResult honored = RunCli(
      train_base + " --out-dir " + scratch + "/m1 --config " + good_cfg);
  REQUIRE(honored.status == 0);
  CHECK(ReadLines(scratch + "/m1/loss_log.tsv").size() == 2);
  CHECK(Contains(Slurp(scratch + "/m1/model.ckpt.meta"), "seed = 111"));

  const CommandResult flag_wins = RunCli(
      train_base + " --out-dir " + scratch + "/m2 --config " + good_cfg +
      " --epochs 0");
  REQUIRE(flag_wins.status == 0);
  CHECK(ReadLines(scratch + "/m2/loss_log.tsv").size() == 1);

  const CommandResult env_wins = RunCli(
      train_base + " --out-dir " + scratch + "/m3 --config " + good_cfg,
      "DEEPTALK_SEED=222");
  REQUIRE(env_wins.status == 0);
  CHECK(Contains(Slurp(scratch + "/m3/model.ckpt.meta"), "seed = 222"));
}

TEST_CASE("runtime failures exit with status one") {
  fs::create_directories(kScratch);
  const CommandResult r = RunCli(
      "embed --manifest no_such_manifest.tsv"
      " --checkpoint no_such_model.ckpt --out " +
      std::string(kScratch) + "/never.tsv");
  CHECK(r.status == 1);
  // The resolved-config log precedes the error line on stderr.
  CHECK(Contains(r.err, "error: "));
}

TEST_CASE("the full pipeline runs end to end") {
  fs::remove_all(kScratch);
  fs::create_directories(kScratch);
  const std::string scratch(kScratch);
  const std::string corpus = scratch + "/corpus";

  const CommandResult synth = RunCli(
      "synth-corpus --out-dir " + corpus +
      " --speakers 4 --utts 3 --utt-seconds 1.2 --seed 91");
  REQUIRE(synth.status == 0);
  CHECK(Contains(synth.err, "# resolved config: synth-corpus"));
  REQUIRE(fs::exists(corpus + "/manifest.tsv"));
  REQUIRE(fs::exists(corpus + "/trials_clean.tsv"));
  REQUIRE(fs::exists(corpus + "/trials_degraded.tsv"));
  CHECK(fs::exists(corpus + "/manifest.tsv.meta"));
  CHECK(fs::exists(corpus + "/trials_clean.tsv.meta"));

  const CommandResult train = RunCli(
      "train --manifest " + corpus + "/manifest.tsv --out-dir " + scratch +
      "/model --epochs 1 --steps-per-epoch 2 --batch 4 --crop-seconds 0.5"
      " --frontend-kernels 7,4 --frontend-channels 4,8 --frontend-strides 4,2"
      " --ref-kernels 3,3 --ref-channels 4,4 --ref-strides 2,2"
      " --gru-hidden 8 --tokens 4 --seed 92");
  REQUIRE(train.status == 0);
  REQUIRE(fs::exists(scratch + "/model/model.ckpt"));
  CHECK(fs::exists(scratch + "/model/model.ckpt.meta"));
  CHECK(fs::exists(scratch + "/model/loss_log.tsv"));
  CHECK(Contains(train.out, "mean loss"));

  const std::string ckpt = scratch + "/model/model.ckpt";
  const CommandResult emb_a = RunCli(
      "embed --manifest " + corpus + "/manifest.tsv --checkpoint " + ckpt +
      " --out " + scratch + "/emb_deeptalk.tsv --weights-out " + scratch +
      "/weights.tsv --split eval --condition clean --system deeptalk");
  REQUIRE(emb_a.status == 0);
  // 2 eval speakers x 3 utterances in the clean condition.
  CHECK(ReadLines(scratch + "/emb_deeptalk.tsv").size() == 6);
  CHECK(ReadLines(scratch + "/weights.tsv").size() == 6);

  const CommandResult emb_b = RunCli(
      "embed --manifest " + corpus + "/manifest.tsv --checkpoint " + ckpt +
      " --out " + scratch + "/emb_frontend.tsv --split eval"
      " --condition clean --system frontend");
  REQUIRE(emb_b.status == 0);

  const CommandResult score_a = RunCli(
      "score --embeddings " + scratch + "/emb_deeptalk.tsv --trials " +
      corpus + "/trials_clean.tsv --out " + scratch +
      "/scores_deeptalk.tsv --system-id deeptalk");
  REQUIRE(score_a.status == 0);
  const CommandResult score_b = RunCli(
      "score --embeddings " + scratch + "/emb_frontend.tsv --trials " +
      corpus + "/trials_clean.tsv --out " + scratch +
      "/scores_frontend.tsv --system-id frontend");
  REQUIRE(score_b.status == 0);

  const CommandResult evaluate = RunCli(
      "evaluate --scores " + scratch + "/scores_deeptalk.tsv --trials " +
      corpus + "/trials_clean.tsv --out-dir " + scratch + "/eval");
  REQUIRE(evaluate.status == 0);
  CHECK(Contains(evaluate.out, "eer="));
  const std::vector<std::string> report =
      ReadLines(scratch + "/eval/report_deeptalk.tsv");
  REQUIRE(report.size() == 6);
  CHECK(SplitTsvLine(report[0])[0] == "eer");
  CHECK(SplitTsvLine(report[4])[0] == "n_genuine");
  CHECK(fs::exists(scratch + "/eval/det_deeptalk.tsv"));

  const CommandResult fuse = RunCli(
      "fuse --scores-a " + scratch + "/scores_frontend.tsv --scores-b " +
      scratch + "/scores_deeptalk.tsv --trials " + corpus +
      "/trials_clean.tsv --out " + scratch + "/scores_fused.tsv");
  REQUIRE(fuse.status == 0);
  const CommandResult eval_fused = RunCli(
      "evaluate --scores " + scratch + "/scores_fused.tsv --trials " +
      corpus + "/trials_clean.tsv --out-dir " + scratch + "/eval");
  REQUIRE(eval_fused.status == 0);
  CHECK(fs::exists(scratch + "/eval/report_fused.tsv"));

  std::string wav_path;
  for (const auto& entry : fs::directory_iterator(corpus + "/wav")) {
    const std::string p = entry.path().string();
    if (p.size() > 10 && p.substr(p.size() - 10) == "_clean.wav") {
      wav_path = p;
      break;
    }
  }
  REQUIRE(!wav_path.empty());

  const CommandResult f0 = RunCli(
      "analyze f0 --wav " + wav_path + " --out " + scratch + "/f0.tsv");
  REQUIRE(f0.status == 0);
  CHECK(Contains(f0.out, "voiced"));
  const std::vector<std::string> f0_lines = ReadLines(scratch + "/f0.tsv");
  REQUIRE(f0_lines.size() >= 2);
  CHECK(f0_lines[0] == "frame\tf0\tvoiced\tperiodicity");
  CHECK(fs::exists(scratch + "/f0.tsv.meta"));

  const CommandResult f0cmp = RunCli(
      "analyze f0-compare --wav-a " + wav_path + " --wav-b " + wav_path +
      " --out " + scratch + "/f0_sim.tsv");
  REQUIRE(f0cmp.status == 0);
  CHECK(Contains(Slurp(scratch + "/f0_sim.tsv"), "pearson_r\t1"));

  const CommandResult spect = RunCli(
      "analyze spectrogram --wav " + wav_path + " --out-tsv " + scratch +
      "/spec.tsv --render " + scratch + "/spec.ppm --overlay-f0");
  REQUIRE(spect.status == 0);
  CHECK(fs::exists(scratch + "/spec.tsv"));
  CHECK(fs::exists(scratch + "/spec.ppm"));
  CHECK(RunCli("analyze spectrogram --wav " + wav_path).status == 1);

  const CommandResult dist = RunCli(
      "analyze distances --embeddings " + scratch +
      "/emb_deeptalk.tsv --manifest " + corpus + "/manifest.tsv --out " +
      scratch + "/distances.tsv");
  REQUIRE(dist.status == 0);
  CHECK(Contains(dist.out, "grand_mean_inter="));
  CHECK(Contains(Slurp(scratch + "/distances.tsv"), "__grand__"));

  const CommandResult project = RunCli(
      "analyze project --embeddings " + scratch +
      "/emb_deeptalk.tsv --out " + scratch + "/coords.tsv");
  REQUIRE(project.status == 0);
  CHECK(ReadLines(scratch + "/coords.tsv")[0] == "utterance_id\tx\ty");

  fs::remove_all(kScratch);
}

TEST_SUITE_END();

}  // namespace
}  // namespace deeptalk
