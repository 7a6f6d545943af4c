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

#include <complex>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "deeptalk/analysis/spectrogram.h"
#include "deeptalk/audio/synth.h"
#include "deeptalk/common/rng.h"
#include "deeptalk/style/embedder.h"
#include "deeptalk/trainer/trainer.h"
#include "deeptalk/trainer/triplet.h"
#include "deeptalk/verification/metrics.h"
#include "deeptalk/verification/trials.h"

namespace deeptalk {
namespace {

EmbedderOptions TrainingOptions() {
  EmbedderOptions opts;
  opts.frontend = {{7, 16, 4}, {5, 32, 2}, {5, 32, 2}, {3, 40, 1}};
  opts.ref_conv = {{3, 16, 2}, {3, 16, 2}, {3, 32, 2}, {3, 32, 2}};
  opts.gru_hidden = 128;
  opts.num_tokens = 10;
  return opts;
}

Eigen::MatrixXd RandomCrop(int frames, int window, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd crop(frames, window);
  for (int t = 0; t < frames; ++t)
    for (int i = 0; i < window; ++i) crop(t, i) = 0.5 * rng.Gaussian();
  return crop;
}

void BM_EmbedForward(benchmark::State& state) {
  const EmbedderOptions opts = TrainingOptions();
  const EmbedderModel model = InitEmbedder(opts, 11);
  const Eigen::MatrixXd crop = RandomCrop(48, opts.framing.window, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EmbedFrames(model, crop, nullptr));
  }
}
BENCHMARK(BM_EmbedForward);

void BM_TrainStep(benchmark::State& state) {
  const EmbedderOptions opts = TrainingOptions();
  EmbedderModel model = InitEmbedder(opts, 21);
  AdamState adam = InitAdamState(CollectParams(&model));
  TrainConfig cfg;
  cfg.triplets_per_batch = 8;
  std::vector<Eigen::MatrixXd> crops;
  for (uint64_t i = 0; i < 8; ++i)
    crops.push_back(RandomCrop(48, opts.framing.window, 100 + i));
  std::vector<TripletIdx> triplets;
  for (int i = 0; i < 8; ++i) triplets.push_back({i % 4, (i + 1) % 4, 4 + i % 4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainStep(cfg, crops, triplets, &model, &adam));
  }
}
BENCHMARK(BM_TrainStep);

void BM_DetSweep(benchmark::State& state) {
  Rng rng(31);
  ScoreSet set;
  set.system_id = "bench";
  for (int i = 0; i < 1000; ++i) {
    set.trials.push_back({{"e" + std::to_string(i), "t" + std::to_string(i),
                           (i % 2) == 0},
                          rng.Gaussian()});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(set));
  }
}
BENCHMARK(BM_DetSweep);

void BM_SynthUtterance(benchmark::State& state) {
  Rng rng(41);
  const SyntheticSpeakerSpec spec = DrawSpeakerSpec("bench", &rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SynthUtterance(spec, 3.0, 42));
  }
}
BENCHMARK(BM_SynthUtterance);

void BM_Fft(benchmark::State& state) {
  Rng rng(51);
  std::vector<std::complex<double>> x(256);
  for (auto& c : x) c = {rng.Gaussian(), 0.0};
  for (auto _ : state) {
    std::vector<std::complex<double>> buf = x;
    Fft(&buf);
    benchmark::DoNotOptimize(buf);
  }
}
BENCHMARK(BM_Fft);

}  // namespace
}  // namespace deeptalk

BENCHMARK_MAIN();
