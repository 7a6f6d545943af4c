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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deeptalk/common/require.h"
#include "deeptalk/common/rng.h"
#include "deeptalk/common/tsv.h"
#include "doctest.h"

namespace deeptalk {
namespace {

TEST_SUITE_BEGIN("common");

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t va = a.NextU64();
    all_equal = all_equal && va == b.NextU64();
    any_differ = any_differ || va != c.NextU64();
  }
  CHECK(all_equal);
  CHECK(any_differ);
}

TEST_CASE("uniform draws stay inside their interval") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.Uniform(-3.0, 5.0);
    CHECK(v >= -3.0);
    CHECK(v < 5.0);
    const int64_t k = rng.UniformInt(7);
    CHECK(k >= 0);
    CHECK(k < 7);
  }
}

TEST_CASE("gaussian draws have roughly standard moments") {
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("derived seeds separate streams") {
  const uint64_t root = 1234;
  CHECK(DeriveSeed(root, 1) == DeriveSeed(root, 1));
  CHECK(DeriveSeed(root, 1) != DeriveSeed(root, 2));
  CHECK(DeriveSeed(root, 1, 0) != DeriveSeed(root, 1, 1));
  CHECK(DeriveSeed(root, 1) != DeriveSeed(root + 1, 1));
}

TEST_CASE("tsv line splitting keeps empty fields") {
  CHECK(SplitTsvLine("a\tb\tc") == std::vector<std::string>{"a", "b", "c"});
  CHECK(SplitTsvLine("a\t\tc") == std::vector<std::string>{"a", "", "c"});
  CHECK(SplitTsvLine("a") == std::vector<std::string>{"a"});
  CHECK(SplitTsvLine("") == std::vector<std::string>{""});
}

TEST_CASE("formatted reals parse back to close values") {
  const double cases[] = {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 12345.6789,
                          1e-12, -2.5e8, 0.4999986659528};
  for (double x : cases) {
    const double y = ParseReal(FormatReal(x), "test");
    const double scale = std::max(1.0, std::abs(x));
    CHECK(std::abs(x - y) <= 1e-11 * scale);
  }
}

TEST_CASE("numeric parsing rejects junk") {
  CHECK_THROWS(ParseReal("not-a-number", "ctx"));
  CHECK_THROWS(ParseReal("", "ctx"));
  CHECK_THROWS(ParseInt("3.5", "ctx"));
  CHECK_THROWS(ParseInt("12abc", "ctx"));
  CHECK(ParseInt("-42", "ctx") == -42);
}

TEST_CASE("text files round-trip and strip carriage returns") {
  const std::string dir = "common_scratch";
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/lines.txt";
  WriteTextFile(path, "first\r\nsecond\n\nthird\n");
  const std::vector<std::string> lines = ReadLines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "first");
  CHECK(lines[1] == "second");
  CHECK(lines[2] == "third");
  std::filesystem::remove_all(dir);
}

TEST_CASE("read of a missing file fails loudly") {
  CHECK_THROWS(ReadLines("no_such_file_anywhere.txt"));
}

TEST_CASE("require carries its message") {
  CHECK_THROWS_WITH(Require(false, "exact message"), "exact message");
  CHECK_NOTHROW(Require(true, "unused"));
}

TEST_SUITE_END();

}  // namespace
}  // namespace deeptalk
