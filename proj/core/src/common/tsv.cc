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

#include "deeptalk/common/tsv.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "deeptalk/common/require.h"

namespace deeptalk {

std::vector<std::string> SplitTsvLine(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), "cannot open file for writing: " + path);
  out << content;
  out.flush();
  Require(out.good(), "write failed: " + path);
}

std::string FormatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double ParseReal(const std::string& field, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  Require(end != field.c_str() && *end == '\0',
          context + ": not a number: '" + field + "'");
  return v;
}

int64_t ParseInt(const std::string& field, const std::string& context) {
  char* end = nullptr;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  Require(end != field.c_str() && *end == '\0',
          context + ": not an integer: '" + field + "'");
  return v;
}

}  // namespace deeptalk
