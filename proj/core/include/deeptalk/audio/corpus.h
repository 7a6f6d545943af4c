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

#ifndef DEEPTALK_AUDIO_CORPUS_H_
#define DEEPTALK_AUDIO_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "deeptalk/audio/waveform.h"

namespace deeptalk {

struct ManifestEntry {
  std::string path;  // relative to the manifest file's directory
  std::string speaker_id;
  std::string split;      // "train" or "eval"
  std::string condition;  // "clean" or "degraded"
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  uint64_t seed = 0;
};

struct CorpusConfig {
  int n_speakers = 20;       // first half train, second half eval
  int utts_per_speaker = 20;
  uint64_t seed = 0;
  std::string out_dir;
  double utt_seconds = 5.0;
  double snr_db = 10.0;  // degraded-condition mixing level
};

// Synthesizes the corpus under cfg.out_dir (WAVs in out_dir/wav), writes
// out_dir/manifest.tsv plus a seed sidecar, and returns the manifest.
// Byte-identical for identical (cfg) including seed.
CorpusManifest BuildCorpus(const CorpusConfig& cfg);

void WriteManifest(const std::string& path, const CorpusManifest& manifest);
CorpusManifest LoadManifest(const std::string& path);

// Resolves an entry path against the directory containing the manifest.
std::string ResolveManifestPath(const std::string& manifest_path,
                                const std::string& entry_path);

// Utterance identifier derived from an entry path: basename without extension.
std::string UtteranceId(const std::string& entry_path);

}  // namespace deeptalk

#endif  // DEEPTALK_AUDIO_CORPUS_H_
