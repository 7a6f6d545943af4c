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

#ifndef DEEPTALK_COMMON_RNG_H_
#define DEEPTALK_COMMON_RNG_H_

#include <cstdint>
#include <random>

namespace deeptalk {

// Seeded random source. The engine (std::mt19937_64) has a fully specified
// output stream; the distribution helpers below are hand-rolled because the
// std:: distributions are implementation-defined and would break the
// byte-identical reproducibility contract across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  int64_t UniformInt(int64_t n) {
    return static_cast<int64_t>(Uniform() * static_cast<double>(n));
  }

  // Standard normal via Box-Muller.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
};

// Mixes a root seed with up to two stream indices into an independent seed.
// Derived seeds make parallel or reordered generation schedule-independent.
uint64_t DeriveSeed(uint64_t root, uint64_t a, uint64_t b = 0);

}  // namespace deeptalk

#endif  // DEEPTALK_COMMON_RNG_H_
