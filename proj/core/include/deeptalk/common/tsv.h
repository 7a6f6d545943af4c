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

#ifndef DEEPTALK_COMMON_TSV_H_
#define DEEPTALK_COMMON_TSV_H_

#include <string>
#include <vector>

namespace deeptalk {

// Splits one line on tabs. No quoting or escaping; the toolkit's file
// formats never embed tabs in fields.
std::vector<std::string> SplitTsvLine(const std::string& line);

// Reads all non-empty lines of a UTF-8 text file, stripping a trailing \r.
std::vector<std::string> ReadLines(const std::string& path);

// Writes text to a file, failing loudly on I/O errors.
void WriteTextFile(const std::string& path, const std::string& content);

// Formats a double with enough digits to round-trip typical pipeline
// precision while staying stable across reruns.
std::string FormatReal(double value);

double ParseReal(const std::string& field, const std::string& context);
int64_t ParseInt(const std::string& field, const std::string& context);

}  // namespace deeptalk

#endif  // DEEPTALK_COMMON_TSV_H_
