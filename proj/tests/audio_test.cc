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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "deeptalk/audio/corpus.h"
#include "deeptalk/audio/synth.h"
#include "deeptalk/audio/wav_io.h"
#include "deeptalk/audio/waveform.h"
#include "deeptalk/common/rng.h"
#include "doctest.h"

namespace deeptalk {
namespace {

namespace fs = std::filesystem;

double PeakAbs(const Waveform& w) {
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  return peak;
}

std::string ReadAllBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

TEST_SUITE_BEGIN("audio");

TEST_CASE("mean power follows its definition") {
  Waveform w;
  w.samples = {1.0, -1.0, 0.0, 2.0};
  CHECK(MeanPower(w) == doctest::Approx(6.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("chunking drops the remainder") {
  Waveform w;
  w.samples.assign(kSampleRate * 12, 0.5);
  const std::vector<Waveform> chunks = SplitIntoChunks(w, 5.0);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].samples.size() == static_cast<size_t>(kSampleRate * 5));
  CHECK(chunks[1].samples.size() == static_cast<size_t>(kSampleRate * 5));

  Waveform short_w;
  short_w.samples.assign(kSampleRate * 3, 0.1);
  CHECK(SplitIntoChunks(short_w, 5.0).empty());

  Waveform exact;
  exact.samples.assign(kSampleRate * 10, 0.1);
  CHECK(SplitIntoChunks(exact, 5.0).size() == 2);
}

TEST_CASE("chunks are consecutive slices") {
  Waveform w;
  for (int i = 0; i < kSampleRate * 2; ++i)
    w.samples.push_back(static_cast<double>(i));
  const std::vector<Waveform> chunks = SplitIntoChunks(w, 1.0);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].samples.front() == 0.0);
  CHECK(chunks[1].samples.front() == static_cast<double>(kSampleRate));
  CHECK(chunks[1].samples.back() == static_cast<double>(kSampleRate * 2 - 1));
}

TEST_CASE("noise mixing hits the requested snr") {
  Waveform signal = SynthUtterance(SyntheticSpeakerSpec{}, 2.0, 5);
  Waveform noise = WhiteNoise(4.0, 6);
  for (double snr_db : {0.0, 5.0, 10.0, 20.0}) {
    const Waveform mixed = MixNoiseAtSnr(signal, noise, snr_db, 77);
    REQUIRE(mixed.samples.size() == signal.samples.size());
    Waveform added;
    added.samples.resize(signal.samples.size());
    for (size_t i = 0; i < signal.samples.size(); ++i)
      added.samples[i] = mixed.samples[i] - signal.samples[i];
    const double measured =
        10.0 * std::log10(MeanPower(signal) / MeanPower(added));
    CHECK(measured == doctest::Approx(snr_db).epsilon(1e-9));
  }
}

TEST_CASE("noise mixing needs enough noise") {
  Waveform signal;
  signal.samples.assign(kSampleRate, 0.5);
  Waveform noise;
  noise.samples.assign(kSampleRate / 2, 0.1);
  CHECK_THROWS(MixNoiseAtSnr(signal, noise, 10.0, 1));
}

TEST_CASE("programmed f0 combines declination and vibrato") {
  SyntheticSpeakerSpec spec;
  spec.base_f0 = 160.0;
  spec.contour.declination_slope = -2.0;
  spec.contour.vibrato_rate = 5.0;
  spec.contour.vibrato_depth = 3.0;
  CHECK(ProgrammedF0(spec, 0.0) == doctest::Approx(160.0).epsilon(1e-12));
  const double expected =
      160.0 - 2.0 * 0.05 + 3.0 * std::sin(2.0 * M_PI * 5.0 * 0.05);
  CHECK(ProgrammedF0(spec, 0.05) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("synthesis is deterministic and peak normalized") {
  SyntheticSpeakerSpec spec;
  spec.base_f0 = 180.0;
  spec.contour.vibrato_rate = 4.0;
  spec.contour.vibrato_depth = 5.0;
  const Waveform a = SynthUtterance(spec, 1.5, 99);
  const Waveform b = SynthUtterance(spec, 1.5, 99);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.size() == static_cast<size_t>(kSampleRate * 1.5));
  CHECK(a.samples == b.samples);
  CHECK(PeakAbs(a) == doctest::Approx(0.9).epsilon(1e-9));

  // The seed only matters once jitter or additive noise is enabled.
  SyntheticSpeakerSpec noisy = spec;
  noisy.jitter = 0.02;
  noisy.noise_floor = 0.01;
  const Waveform c = SynthUtterance(noisy, 1.5, 99);
  const Waveform d = SynthUtterance(noisy, 1.5, 100);
  CHECK(c.samples != d.samples);
}

TEST_CASE("speaker spec validation rejects out-of-range settings") {
  SyntheticSpeakerSpec ok;
  CHECK_NOTHROW(ValidateSpeakerSpec(ok));
  SyntheticSpeakerSpec low = ok;
  low.base_f0 = 60.0;
  CHECK_THROWS(ValidateSpeakerSpec(low));
  SyntheticSpeakerSpec high = ok;
  high.base_f0 = 350.0;
  CHECK_THROWS(ValidateSpeakerSpec(high));
  SyntheticSpeakerSpec jitter = ok;
  jitter.jitter = 0.2;
  CHECK_THROWS(ValidateSpeakerSpec(jitter));
}

TEST_CASE("synthesis rejects contours escaping the pitch range") {
  SyntheticSpeakerSpec spec;
  spec.base_f0 = 100.0;
  spec.contour.declination_slope = -30.0;
  CHECK_THROWS(SynthUtterance(spec, 5.0, 1));
}

TEST_CASE("noise generators are deterministic and normalized") {
  const Waveform w1 = WhiteNoise(1.0, 3);
  const Waveform w2 = WhiteNoise(1.0, 3);
  CHECK(w1.samples == w2.samples);
  CHECK(PeakAbs(w1) == doctest::Approx(0.9).epsilon(1e-9));

  const Waveform b1 = BabbleNoise(1.0, 4);
  const Waveform b2 = BabbleNoise(1.0, 4);
  CHECK(b1.samples == b2.samples);
  CHECK(PeakAbs(b1) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(b1.samples != w1.samples);
}

TEST_CASE("drawn speaker specs are always legal") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const SyntheticSpeakerSpec spec = DrawSpeakerSpec("spk", &rng);
    CHECK(spec.speaker_id == "spk");
    CHECK_NOTHROW(ValidateSpeakerSpec(spec));
    CHECK_NOTHROW(SynthUtterance(spec, 1.0, 0));
  }
}

TEST_CASE("wav files round-trip within quantization error") {
  const std::string dir = "audio_scratch";
  fs::create_directories(dir);
  const std::string path = dir + "/tone.wav";
  const Waveform original = SynthUtterance(SyntheticSpeakerSpec{}, 1.0, 12);
  SaveWav(path, original);
  const Waveform loaded = LoadWav(path);
  REQUIRE(loaded.samples.size() == original.samples.size());
  CHECK(loaded.sample_rate == kSampleRate);
  double max_err = 0.0;
  for (size_t i = 0; i < loaded.samples.size(); ++i)
    max_err = std::max(max_err,
                       std::abs(loaded.samples[i] - original.samples[i]));
  // Quantization rounds to the nearest of 32767 steps over a [-1, 1] span
  // read back at a 1/32768 step, so the worst case is 1.5 steps.
  CHECK(max_err <= 1.5 / 32768.0);
  fs::remove_all(dir);
}

TEST_CASE("wav writing clips out-of-range samples") {
  const std::string dir = "audio_scratch";
  fs::create_directories(dir);
  const std::string path = dir + "/clip.wav";
  Waveform hot;
  hot.samples = {1.5, -1.5, 0.0};
  SaveWav(path, hot);
  const Waveform loaded = LoadWav(path);
  REQUIRE(loaded.samples.size() == 3);
  CHECK(loaded.samples[0] >= 0.999);
  CHECK(loaded.samples[1] <= -0.999);
  CHECK(loaded.samples[2] == doctest::Approx(0.0).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("wav loading rejects foreign formats") {
  const std::string dir = "audio_scratch";
  fs::create_directories(dir);
  const std::string path = dir + "/probe.wav";
  Waveform w;
  w.samples.assign(800, 0.25);
  SaveWav(path, w);
  const std::string good = ReadAllBytes(path);

  auto patched = [&](size_t offset, uint32_t value, int bytes) {
    std::string bad = good;
    for (int i = 0; i < bytes; ++i)
      bad[offset + i] = static_cast<char>((value >> (8 * i)) & 0xff);
    const std::string p = dir + "/bad.wav";
    std::ofstream out(p, std::ios::binary);
    out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
    out.close();
    return p;
  };

  CHECK_THROWS(LoadWav(dir + "/missing.wav"));
  CHECK_THROWS(LoadWav(patched(24, 16000, 4)));  // sample rate field
  CHECK_THROWS(LoadWav(patched(22, 2, 2)));      // channel count field
  CHECK_THROWS(LoadWav(patched(34, 8, 2)));      // bits per sample field

  const std::string truncated_path = dir + "/short.wav";
  std::ofstream out(truncated_path, std::ios::binary);
  out.write(good.data(), 20);
  out.close();
  CHECK_THROWS(LoadWav(truncated_path));
  fs::remove_all(dir);
}

TEST_CASE("corpus generation is deterministic and complete") {
  const std::string dir_a = "audio_scratch/corpus_a";
  const std::string dir_b = "audio_scratch/corpus_b";
  fs::remove_all("audio_scratch");
  CorpusConfig cfg;
  cfg.n_speakers = 4;
  cfg.utts_per_speaker = 2;
  cfg.seed = 31;
  cfg.utt_seconds = 1.2;
  cfg.out_dir = dir_a;
  const CorpusManifest manifest = BuildCorpus(cfg);
  cfg.out_dir = dir_b;
  BuildCorpus(cfg);

  REQUIRE(manifest.entries.size() == 4 * 2 * 2);
  std::set<std::string> train_speakers, eval_speakers, conditions;
  for (const ManifestEntry& e : manifest.entries) {
    CHECK(fs::exists(fs::path(dir_a) / e.path));
    conditions.insert(e.condition);
    if (e.split == "train") train_speakers.insert(e.speaker_id);
    else if (e.split == "eval") eval_speakers.insert(e.speaker_id);
    else FAIL("unknown split " << e.split);
  }
  CHECK(train_speakers.size() == 2);
  CHECK(eval_speakers.size() == 2);
  CHECK(conditions == std::set<std::string>{"clean", "degraded"});
  for (const std::string& s : train_speakers)
    CHECK(eval_speakers.count(s) == 0);

  CHECK(ReadAllBytes(dir_a + "/manifest.tsv") ==
        ReadAllBytes(dir_b + "/manifest.tsv"));
  const std::string wav_rel = manifest.entries.front().path;
  CHECK(ReadAllBytes((fs::path(dir_a) / wav_rel).string()) ==
        ReadAllBytes((fs::path(dir_b) / wav_rel).string()));

  const CorpusManifest loaded = LoadManifest(dir_a + "/manifest.tsv");
  REQUIRE(loaded.entries.size() == manifest.entries.size());
  for (size_t i = 0; i < loaded.entries.size(); ++i) {
    CHECK(loaded.entries[i].path == manifest.entries[i].path);
    CHECK(loaded.entries[i].speaker_id == manifest.entries[i].speaker_id);
    CHECK(loaded.entries[i].split == manifest.entries[i].split);
    CHECK(loaded.entries[i].condition == manifest.entries[i].condition);
  }
  fs::remove_all("audio_scratch");
}

TEST_CASE("degraded utterances differ from clean ones") {
  const std::string dir = "audio_scratch/corpus_c";
  fs::remove_all("audio_scratch");
  CorpusConfig cfg;
  cfg.n_speakers = 4;
  cfg.utts_per_speaker = 1;
  cfg.seed = 8;
  cfg.utt_seconds = 1.0;
  cfg.out_dir = dir;
  const CorpusManifest manifest = BuildCorpus(cfg);
  std::string clean_path, degraded_path;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.speaker_id != manifest.entries[0].speaker_id) continue;
    if (e.condition == "clean") clean_path = e.path;
    if (e.condition == "degraded") degraded_path = e.path;
  }
  REQUIRE(!clean_path.empty());
  REQUIRE(!degraded_path.empty());
  const Waveform clean = LoadWav((fs::path(dir) / clean_path).string());
  const Waveform degraded = LoadWav((fs::path(dir) / degraded_path).string());
  REQUIRE(clean.samples.size() == degraded.samples.size());
  CHECK(clean.samples != degraded.samples);
  fs::remove_all("audio_scratch");
}

TEST_CASE("manifest loading rejects a wrong header") {
  const std::string dir = "audio_scratch";
  fs::create_directories(dir);
  const std::string path = dir + "/manifest.tsv";
  std::ofstream out(path);
  out << "path\tspeaker\tsplit\tcondition\n";
  out << "wav/a.wav\tspk000\ttrain\tclean\n";
  out.close();
  CHECK_THROWS(LoadManifest(path));
  fs::remove_all(dir);
}

TEST_CASE("manifest paths resolve relative to the manifest") {
  CHECK(ResolveManifestPath("corpus/manifest.tsv", "wav/x.wav") ==
        "corpus/wav/x.wav");
  CHECK(ResolveManifestPath("manifest.tsv", "wav/x.wav") == "wav/x.wav");
  CHECK(ResolveManifestPath("corpus/manifest.tsv", "/abs/x.wav") ==
        "/abs/x.wav");
}

TEST_CASE("utterance ids are path stems") {
  CHECK(UtteranceId("wav/spk000_utt003_clean.wav") == "spk000_utt003_clean");
  CHECK(UtteranceId("spk001_utt000_degraded.wav") == "spk001_utt000_degraded");
}

TEST_SUITE_END();

}  // namespace
}  // namespace deeptalk
