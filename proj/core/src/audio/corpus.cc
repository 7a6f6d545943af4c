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

#include "deeptalk/audio/corpus.h"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <set>
#include <utility>

#include "deeptalk/audio/synth.h"
#include "deeptalk/audio/wav_io.h"
#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"
#include "deeptalk/common/tsv.h"

namespace deeptalk {

namespace {

// Seed stream tags so per-utterance jobs are schedule independent.
constexpr uint64_t kTagSpeakerSpec = 1;
constexpr uint64_t kTagUtterance = 2;
constexpr uint64_t kTagNoise = 3;
constexpr uint64_t kTagMixOffset = 4;

uint64_t UttKey(int speaker, int utt) {
  return static_cast<uint64_t>(speaker) * 1000000u +
         static_cast<uint64_t>(utt);
}

std::string SpeakerName(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%03d", index);
  return buf;
}

std::string UttStem(const std::string& speaker, int utt,
                    const std::string& condition) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%03d", utt);
  return speaker + "_utt" + buf + "_" + condition;
}

}  // namespace

CorpusManifest BuildCorpus(const CorpusConfig& cfg) {
  Require(cfg.n_speakers >= 4,
          "need at least 4 speakers, got " + std::to_string(cfg.n_speakers));
  Require(cfg.utts_per_speaker >= 1, "utts_per_speaker must be >= 1");
  Require(!cfg.out_dir.empty(), "out_dir must be set");

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(cfg.out_dir) / "wav", ec);
  Require(!ec, "cannot create output directory " + cfg.out_dir + ": " +
                   ec.message());

  const int n_eval = cfg.n_speakers / 2;
  const int n_train = cfg.n_speakers - n_eval;

  CorpusManifest manifest;
  manifest.seed = cfg.seed;
  for (int s = 0; s < cfg.n_speakers; ++s) {
    const std::string speaker = SpeakerName(s);
    const std::string split = s < n_train ? "train" : "eval";
    Rng spec_rng(DeriveSeed(cfg.seed, kTagSpeakerSpec, s));
    const SyntheticSpeakerSpec spec = DrawSpeakerSpec(speaker, &spec_rng);

    for (int u = 0; u < cfg.utts_per_speaker; ++u) {
      const uint64_t key = UttKey(s, u);
      const Waveform clean = SynthUtterance(
          spec, cfg.utt_seconds, DeriveSeed(cfg.seed, kTagUtterance, key));

      const double noise_seconds = cfg.utt_seconds + 1.0;
      const uint64_t noise_seed = DeriveSeed(cfg.seed, kTagNoise, key);
      const Waveform noise = (u % 2 == 0)
                                 ? WhiteNoise(noise_seconds, noise_seed)
                                 : BabbleNoise(noise_seconds, noise_seed);
      const Waveform degraded = MixNoiseAtSnr(
          clean, noise, cfg.snr_db, DeriveSeed(cfg.seed, kTagMixOffset, key));

      const std::pair<const char*, const Waveform*> variants[] = {
          {"clean", &clean}, {"degraded", &degraded}};
      for (const auto& [condition, wave] : variants) {
        const std::string rel = "wav/" + UttStem(speaker, u, condition) + ".wav";
        SaveWav((fs::path(cfg.out_dir) / rel).string(), *wave);
        manifest.entries.push_back({rel, speaker, split, condition});
      }
    }
  }

  WriteManifest((fs::path(cfg.out_dir) / "manifest.tsv").string(), manifest);
  return manifest;
}

void WriteManifest(const std::string& path, const CorpusManifest& manifest) {
  std::set<std::string> seen;
  std::string text = "path\tspeaker_id\tsplit\tcondition\n";
  for (const ManifestEntry& e : manifest.entries) {
    Require(seen.insert(e.path).second, "duplicate manifest path: " + e.path);
    text += e.path + "\t" + e.speaker_id + "\t" + e.split + "\t" +
            e.condition + "\n";
  }
  WriteTextFile(path, text);
  char seed_line[64];
  std::snprintf(seed_line, sizeof(seed_line), "seed = %" PRIu64 "\n",
                manifest.seed);
  WriteTextFile(path + ".meta", seed_line);
}

CorpusManifest LoadManifest(const std::string& path) {
  const std::vector<std::string> lines = ReadLines(path);
  Require(!lines.empty(), path + ": empty manifest");
  Require(lines[0] == "path\tspeaker_id\tsplit\tcondition",
          path + ": bad manifest header: " + lines[0]);
  CorpusManifest manifest;
  std::set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitTsvLine(lines[i]);
    Require(f.size() == 4, path + ": line " + std::to_string(i + 1) +
                               ": expected 4 columns, got " +
                               std::to_string(f.size()));
    Require(f[2] == "train" || f[2] == "eval",
            path + ": bad split value: " + f[2]);
    Require(f[3] == "clean" || f[3] == "degraded",
            path + ": bad condition value: " + f[3]);
    Require(seen.insert(f[0]).second, path + ": duplicate path: " + f[0]);
    manifest.entries.push_back({f[0], f[1], f[2], f[3]});
  }
  std::set<std::string> train_speakers;
  std::set<std::string> eval_speakers;
  for (const ManifestEntry& e : manifest.entries) {
    (e.split == "train" ? train_speakers : eval_speakers).insert(e.speaker_id);
  }
  for (const std::string& s : eval_speakers) {
    Require(train_speakers.count(s) == 0,
            path + ": speaker " + s + " appears in both train and eval");
  }

  const std::string meta_path = path + ".meta";
  if (std::filesystem::exists(meta_path)) {
    for (const std::string& line : ReadLines(meta_path)) {
      if (line.rfind("seed = ", 0) == 0) {
        manifest.seed =
            static_cast<uint64_t>(ParseInt(line.substr(7), meta_path));
      }
    }
  }
  return manifest;
}

std::string ResolveManifestPath(const std::string& manifest_path,
                                const std::string& entry_path) {
  return (std::filesystem::path(manifest_path).parent_path() / entry_path)
      .string();
}

std::string UtteranceId(const std::string& entry_path) {
  return std::filesystem::path(entry_path).stem().string();
}

}  // namespace deeptalk
